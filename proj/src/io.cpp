#include "sunsky/io.hpp"

#include <ImfChannelList.h>
#include <ImfFrameBuffer.h>
#include <ImfHeader.h>
#include <ImfInputFile.h>
#include <ImfOutputFile.h>
#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "sunsky/error.hpp"

namespace sunsky {

namespace fs = std::filesystem;

LinearImage read_linear_exr(const fs::path& path) {
  if (!fs::exists(path)) throw IngestError("no such file: " + path.string());
  LinearImage img;
  try {
    Imf::InputFile file(path.string().c_str());
    const Imath::Box2i dw = file.header().dataWindow();
    const int w = dw.max.x - dw.min.x + 1;
    const int h = dw.max.y - dw.min.y + 1;
    const Imf::ChannelList& list = file.header().channels();
    std::vector<std::string> names;
    for (auto it = list.begin(); it != list.end(); ++it) names.emplace_back(it.name());

    std::vector<std::string> wanted;
    if (names.size() == 3 && list.findChannel("R") && list.findChannel("G") && list.findChannel("B")) {
      wanted = {"R", "G", "B"};
    } else if (names.size() == 1) {
      wanted = names;
    } else {
      throw IngestError(path.string() + ": expected channels R,G,B or a single channel, found " +
                        std::to_string(names.size()) + " channels");
    }

    const int ch = static_cast<int>(wanted.size());
    img = LinearImage(w, h, ch);
    Imf::FrameBuffer fb;
    char* base = reinterpret_cast<char*>(img.data().data()) -
                 (static_cast<std::ptrdiff_t>(dw.min.x) + static_cast<std::ptrdiff_t>(dw.min.y) * w) *
                     ch * static_cast<std::ptrdiff_t>(sizeof(float));
    for (int c = 0; c < ch; ++c) {
      fb.insert(wanted[c], Imf::Slice(Imf::FLOAT, base + c * sizeof(float), ch * sizeof(float),
                                      static_cast<std::size_t>(w) * ch * sizeof(float)));
    }
    file.setFrameBuffer(fb);
    file.readPixels(dw.min.y, dw.max.y);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw IngestError(path.string() + ": " + e.what());
  }

  auto data = img.data();
  bool clamped = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      const std::size_t p = i / img.channels();
      throw IngestError(path.string() + ": non-finite sample at pixel index " + std::to_string(p) +
                        " (x=" + std::to_string(p % img.width()) + ", y=" + std::to_string(p / img.width()) +
                        ")");
    }
    if (data[i] < 0.0f) {
      data[i] = 0.0f;
      clamped = true;
    }
  }
  if (clamped) log_warning(path.string() + ": negative samples clamped to 0");
  return img;
}

void write_linear_exr(const LinearImage& img, const fs::path& path) {
  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  const std::vector<std::string> names = ch == 3 ? std::vector<std::string>{"R", "G", "B"}
                                                 : std::vector<std::string>{"Y"};
  try {
    Imf::Header header(w, h);
    header.compression() = Imf::ZIP_COMPRESSION;
    for (const auto& n : names) header.channels().insert(n, Imf::Channel(Imf::FLOAT));
    Imf::OutputFile file(path.string().c_str(), header);
    Imf::FrameBuffer fb;
    char* base = const_cast<char*>(reinterpret_cast<const char*>(img.data().data()));
    for (int c = 0; c < ch; ++c) {
      fb.insert(names[c], Imf::Slice(Imf::FLOAT, base + c * sizeof(float), ch * sizeof(float),
                                     static_cast<std::size_t>(w) * ch * sizeof(float)));
    }
    file.setFrameBuffer(fb);
    file.writePixels(h);
  } catch (const std::exception& e) {
    throw IngestError("cannot write " + path.string() + ": " + e.what());
  }
}

namespace {

struct PngWriter {
  FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void write_png_rows(const fs::path& path, int width, int height, int bit_depth,
                    const std::vector<std::vector<png_byte>>& rows) {
  PngWriter wr;
  wr.fp = std::fopen(path.string().c_str(), "wb");
  if (!wr.fp) throw IngestError("cannot write " + path.string());
  wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!wr.png) throw IngestError("libpng initialisation failed");
  wr.info = png_create_info_struct(wr.png);
  if (!wr.info) throw IngestError("libpng initialisation failed");
  if (setjmp(png_jmpbuf(wr.png))) throw IngestError("libpng error writing " + path.string());
  png_init_io(wr.png, wr.fp);
  png_set_IHDR(wr.png, wr.info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);
  for (const auto& row : rows) png_write_row(wr.png, row.data());
  png_write_end(wr.png, nullptr);
}

}  // namespace

void write_gray8_png(const Gray8Image& img, const fs::path& path) {
  std::vector<std::vector<png_byte>> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y].assign(img.data.begin() + static_cast<std::ptrdiff_t>(y) * img.width,
                   img.data.begin() + static_cast<std::ptrdiff_t>(y + 1) * img.width);
  write_png_rows(path, img.width, img.height, 8, rows);
}

void write_mask_png(const BinaryMask& mask, const fs::path& path) {
  std::vector<std::vector<png_byte>> rows(mask.height(), std::vector<png_byte>((mask.width() + 7) / 8, 0));
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.get(x, y)) rows[y][x / 8] |= static_cast<png_byte>(0x80u >> (x % 8));
  write_png_rows(path, mask.width(), mask.height(), 1, rows);
}

BinaryMask read_mask_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IngestError("cannot read " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IngestError("cannot decode " + path.string() + ": " + image.message);
  }
  BinaryMask mask(static_cast<int>(image.width), static_cast<int>(image.height));
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      mask.set(x, y, buffer[static_cast<std::size_t>(y) * mask.width() + x] >= 128);
  return mask;
}

}  // namespace sunsky
