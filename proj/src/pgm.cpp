#include "tattr/pgm.hpp"

#include <cctype>
#include <fstream>

namespace tattr {

void write_pgm(const GrayImage& img, const std::string& path) {
  if (img.height < 1 || img.width < 1 || img.pixels.size() != static_cast<std::size_t>(img.height * img.width))
    throw ValidationError("image dimensions do not match pixel buffer");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("failed writing " + path);
}

namespace {

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw ParseError("unexpected end of PGM header in " + path);
  return tok;
}

int parse_int_token(std::istream& in, const std::string& path, const char* what) {
  const std::string tok = next_token(in, path);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw ParseError(std::string("PGM ") + what + " is not a number in " + path);
  }
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file " + path);
  const std::string magic = next_token(in, path);
  if (magic != "P5" && magic != "P2") throw ParseError("unsupported PGM magic \"" + magic + "\" in " + path);
  GrayImage img;
  img.width = parse_int_token(in, path, "width");
  img.height = parse_int_token(in, path, "height");
  const int maxval = parse_int_token(in, path, "maxval");
  if (img.width < 1 || img.height < 1) throw ParseError("invalid PGM dimensions in " + path);
  if (maxval < 1 || maxval > 255) throw ParseError("PGM maxval must be in [1, 255] in " + path);
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(count);
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) throw ParseError("truncated PGM payload in " + path);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = parse_int_token(in, path, "pixel");
      if (v < 0 || v > maxval) throw ParseError("PGM pixel out of range in " + path);
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

}  // namespace tattr
