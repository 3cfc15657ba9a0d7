#pragma once

#include "stegokey/image.hpp"

#include <string>

namespace stegokey
{

// Binary PGM (magic "P5", maxval 255). Anything else is out of scope.
struct PgmError : std::runtime_error
{
    enum class Kind
    {
        io,          // cannot open / read / write
        bad_magic,   // not "P5" (covers ASCII "P2" and foreign formats)
        bad_header,  // malformed or missing width/height/maxval tokens
        bad_maxval,  // well-formed but maxval != 255
        truncated,   // payload shorter than width*height
    };

    PgmError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}

    Kind kind;
};

GrayImage read_pgm(const std::string& path);
void write_pgm(const GrayImage& image, const std::string& path);

} // namespace stegokey
