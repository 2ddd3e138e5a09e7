#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "posewire/preprocess.hpp"

namespace posewire {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::string& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw ImageError("truncated PNM header");
  return bytes.substr(start, pos - start);
}

std::size_t parse_dim(const std::string& tok) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) throw ImageError("bad PNM header field '" + tok + "'");
  return v;
}

}  // namespace

RasterImage parse_pnm(const std::string& bytes) {
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos);
  std::size_t channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw ImageError("unsupported PNM type '" + magic + "' (expected P5 or P6)");
  }
  const std::size_t width = parse_dim(next_token(bytes, pos));
  const std::size_t height = parse_dim(next_token(bytes, pos));
  const std::size_t maxval = parse_dim(next_token(bytes, pos));
  if (maxval != 255) throw ImageError("only 8-bit PNM (maxval 255) is supported");
  ++pos;  // single whitespace byte before the raster

  RasterImage img(width, height, channels);
  if (bytes.size() < pos + img.pixels.size()) throw ImageError("truncated PNM raster");
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), img.pixels.size(), img.pixels.begin());
  return img;
}

std::string format_pnm(const RasterImage& img) {
  std::ostringstream out;
  out << (img.channels == 1 ? "P5" : "P6") << '\n' << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  return out.str();
}

RasterImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pnm(buf.str());
  } catch (const ImageError& e) {
    throw ImageError(path.string() + ": " + e.what());
  }
}

void write_pnm(const RasterImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  const std::string bytes = format_pnm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ImageError("cannot write " + path.string());
}

}  // namespace posewire
