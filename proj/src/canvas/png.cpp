#include <png.h>

#include <cstring>

#include "mtmod/codec.hpp"
#include "mtmod/error.hpp"

namespace mtmod {

Bytes encode_png(const Canvas& c) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(c.width());
  image.height = static_cast<png_uint_32>(c.height());
  image.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  const auto* pixels = c.bytes().data();
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr))
    throw Error(std::string("PNG encode failed: ") + image.message);
  Bytes out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr))
    throw Error(std::string("PNG encode failed: ") + image.message);
  out.resize(size);
  return out;
}

Canvas decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw DecodeError(std::string("PNG decode failed: ") + image.message);
  image.format = PNG_FORMAT_RGB;
  if (image.width < 1 || image.height < 1 || image.width > 1u << 15 || image.height > 1u << 15) {
    png_image_free(&image);
    throw DecodeError("PNG dimensions out of range");
  }
  Canvas out(static_cast<int>(image.width), static_cast<int>(image.height));
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, out.bytes().data(), 0, nullptr))
    throw DecodeError(std::string("PNG decode failed: ") + image.message);
  return out;
}

}  // namespace mtmod
