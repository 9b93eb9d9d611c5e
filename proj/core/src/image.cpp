#include "tribunal/image.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "tribunal/error.hpp"
#include "tribunal/http.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal {

namespace {

using FilePtr = std::unique_ptr<std::FILE, decltype(&std::fclose)>;

FilePtr open_file(const std::filesystem::path& p, const char* mode) {
  FilePtr f(std::fopen(p.c_str(), mode), &std::fclose);
  if (!f) throw Error(mode[0] == 'r' ? ErrorCode::UnreadableFile : ErrorCode::IoError, "cannot open " + p.string());
  return f;
}

std::uint8_t quantize(float v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Image load_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw Error(ErrorCode::DecodeError, "bad PNG " + path.string() + ": " + img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (img.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  img.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB) : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error(ErrorCode::DecodeError, "bad PNG " + path.string() + ": " + img.message);
  }
  Image out(static_cast<int>(img.width), static_cast<int>(img.height), PNG_IMAGE_SAMPLE_CHANNELS(img.format));
  std::copy(buf.begin(), buf.end(), out.data.begin());
  return out;
}

void save_png(const Image& image, const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  switch (image.channels) {
    case 1: img.format = PNG_FORMAT_GRAY; break;
    case 2: img.format = PNG_FORMAT_GA; break;
    case 3: img.format = PNG_FORMAT_RGB; break;
    case 4: img.format = PNG_FORMAT_RGBA; break;
    default: throw Error(ErrorCode::PreconditionViolation, "unsupported channel count");
  }
  std::vector<std::uint8_t> buf(image.data.size());
  std::transform(image.data.begin(), image.data.end(), buf.begin(), quantize);
  if (!png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, "cannot write PNG " + path.string() + ": " + img.message);
  }
}

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// No C++ objects with destructors may be live across the setjmp below.
bool decode_jpeg(std::FILE* file, Image& out, char* message) {
  jpeg_decompress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space != JCS_GRAYSCALE) cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out.width = static_cast<int>(cinfo.output_width);
  out.height = static_cast<int>(cinfo.output_height);
  out.channels = cinfo.output_components;
  out.data.assign(static_cast<std::size_t>(out.width) * out.height * out.channels, 0.0f);
  const auto stride = static_cast<std::size_t>(out.width) * out.channels;
  JSAMPARRAY row = (*cinfo.mem->alloc_sarray)(reinterpret_cast<j_common_ptr>(&cinfo), JPOOL_IMAGE,
                                              static_cast<JDIMENSION>(stride), 1);
  while (cinfo.output_scanline < cinfo.output_height) {
    const auto y = cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, row, 1);
    for (std::size_t i = 0; i < stride; ++i) out.data[y * stride + i] = row[0][i];
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

Image load_jpeg(const std::filesystem::path& path) {
  auto f = open_file(path, "rb");
  Image out;
  char message[JMSG_LENGTH_MAX] = {0};
  if (!decode_jpeg(f.get(), out, message)) throw Error(ErrorCode::DecodeError, "bad JPEG " + path.string() + ": " + message);
  return out;
}

bool encode_jpeg(std::FILE* file, const Image& image, const std::uint8_t* pixels) {
  jpeg_compress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = image.channels;
  cinfo.in_color_space = image.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 95, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const auto stride = static_cast<std::size_t>(image.width) * image.channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPROW>(pixels + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

void save_jpeg(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorCode::PreconditionViolation, "JPEG output needs 1 or 3 channels");
  }
  std::vector<std::uint8_t> buf(image.data.size());
  std::transform(image.data.begin(), image.data.end(), buf.begin(), quantize);
  auto f = open_file(path, "wb");
  if (!encode_jpeg(f.get(), image, buf.data())) throw Error(ErrorCode::IoError, "cannot write JPEG " + path.string());
}

Image load_pnm(const std::string& bytes, const std::filesystem::path& path) {
  std::istringstream in(bytes);
  std::string magic;
  in >> magic;
  const int channels = magic == "P6" ? 3 : (magic == "P5" ? 1 : 0);
  auto next_int = [&] {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      in >> std::ws;
    }
    int v = -1;
    in >> v;
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (channels == 0 || w <= 0 || h <= 0 || maxval != 255) {
    throw Error(ErrorCode::DecodeError, "unsupported PNM " + path.string());
  }
  in.get();
  Image out(w, h, channels);
  std::string raw(out.data.size(), '\0');
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw Error(ErrorCode::DecodeError, "truncated PNM " + path.string());
  for (std::size_t i = 0; i < raw.size(); ++i) out.data[i] = static_cast<std::uint8_t>(raw[i]);
  return out;
}

void save_pnm(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) throw Error(ErrorCode::PreconditionViolation, "PNM needs 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << (image.channels == 3 ? "P6" : "P5") << "\n" << image.width << " " << image.height << "\n255\n";
  for (float v : image.data) out.put(static_cast<char>(quantize(v)));
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path.string());
  if (bytes.size() >= 8 && bytes.compare(0, 8, "\x89PNG\r\n\x1a\n") == 0) return load_png(path);
  if (bytes.size() >= 3 && bytes.compare(0, 3, "\xff\xd8\xff") == 0) return load_jpeg(path);
  if (bytes.size() >= 2 && (bytes.compare(0, 2, "P6") == 0 || bytes.compare(0, 2, "P5") == 0)) {
    return load_pnm(bytes, path);
  }
  throw Error(ErrorCode::DecodeError, "unrecognised image format: " + path.string());
}

void save_image(const Image& image, const std::filesystem::path& path) {
  if (image.width <= 0 || image.height <= 0 ||
      image.data.size() != static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw Error(ErrorCode::PreconditionViolation, "image buffer does not match its dimensions");
  }
  const auto ext = text::to_lower(path.extension().string());
  if (ext == ".png") return save_png(image, path);
  if (ext == ".jpg" || ext == ".jpeg") return save_jpeg(image, path);
  if (ext == ".ppm" || ext == ".pgm") return save_pnm(image, path);
  throw Error(ErrorCode::PreconditionViolation, "unsupported output extension " + ext);
}

}  // namespace tribunal
