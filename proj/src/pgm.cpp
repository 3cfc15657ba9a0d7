#include "stegokey/pgm.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <string>

namespace stegokey
{

namespace
{

// Next header token, skipping whitespace and '#' comments.
std::string header_token(std::istream& in)
{
    std::string token;
    int c = in.get();
    while (c != EOF)
    {
        if (c == '#')
        {
            while (c != EOF && c != '\n')
                c = in.get();
        }
        else if (std::isspace(c))
        {
            c = in.get();
        }
        else
        {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#')
    {
        token.push_back(char(c));
        c = in.get();
    }
    if (c != EOF)
        in.unget(); // the terminator is not ours; maxval's is the payload separator
    return token;
}

std::size_t header_number(std::istream& in, const char* what)
{
    const std::string token = header_token(in);
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
        throw PgmError(PgmError::Kind::bad_header,
                       std::string("malformed PGM header: bad ") + what + " token \"" + token +
                           "\"");
    return std::stoull(token);
}

} // namespace

GrayImage read_pgm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw PgmError(PgmError::Kind::io, "cannot open " + path);

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5')
        throw PgmError(PgmError::Kind::bad_magic,
                       "unsupported format in " + path + ": expected binary PGM magic \"P5\"");

    const std::size_t width = header_number(in, "width");
    const std::size_t height = header_number(in, "height");
    const std::size_t maxval = header_number(in, "maxval");
    if (width == 0 || height == 0)
        throw PgmError(PgmError::Kind::bad_header, "malformed PGM header: zero dimension");
    if (maxval != 255)
        throw PgmError(PgmError::Kind::bad_maxval,
                       "unsupported maxval " + std::to_string(maxval) + " (only 255)");

    // exactly one whitespace byte separates the header from the payload
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        throw PgmError(PgmError::Kind::bad_header, "malformed PGM header: missing separator");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(width * height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
    if (std::size_t(in.gcount()) != img.pixels.size())
        throw PgmError(PgmError::Kind::truncated,
                       "truncated PGM payload: got " + std::to_string(in.gcount()) + " of " +
                           std::to_string(img.pixels.size()) + " bytes");
    return img;
}

void write_pgm(const GrayImage& image, const std::string& path)
{
    if (image.pixels.size() != image.width * image.height)
        throw DimensionError("write_pgm: pixel buffer does not match dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw PgmError(PgmError::Kind::io, "cannot create " + path);
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              std::streamsize(image.pixels.size()));
    if (!out)
        throw PgmError(PgmError::Kind::io, "short write to " + path);
}

} // namespace stegokey
