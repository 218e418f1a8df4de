#include "bsprop/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bsprop {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf.data(), end);
}

void write_values_text(const std::filesystem::path& path,
                       std::span<const double> values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  for (double v : values) out << format_double(v) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<double> read_values_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    if (*begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": not a finite number: '" + line + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::runtime_error("'" + path.string() + "' holds no values");
  return values;
}

// ---------------------------------------------------------------------------
// WAV

namespace {

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& why) {
    return std::runtime_error("'" + path.string() + "': " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw fail("truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw fail("truncated extensible fmt chunk");
        format = le16(f + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }
  if (format == 0) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  if (channels == 0) throw fail("zero channels");

  WavData wav;
  wav.sample_rate = rate;
  wav.channels = channels;
  const std::size_t width = bits / 8;
  if (width == 0 || bits % 8 != 0) throw fail("unsupported bit depth");
  const std::size_t count = data_size / width;
  wav.samples.resize(count);

  if (format == kFormatPcm) {
    if (bits == 8) {
      for (std::size_t i = 0; i < count; ++i)
        wav.samples[i] = (static_cast<double>(data[i]) - 128.0) / 128.0;
    } else if (bits == 16 || bits == 24 || bits == 32) {
      const double scale = std::ldexp(1.0, static_cast<int>(bits) - 1);
      for (std::size_t i = 0; i < count; ++i) {
        const unsigned char* p = data + i * width;
        std::uint32_t raw = 0;
        for (std::size_t b = 0; b < width; ++b) raw |= static_cast<std::uint32_t>(p[b]) << (8 * b);
        // sign-extend from `bits`
        const std::uint32_t sign = 1u << (bits - 1);
        std::int64_t value = static_cast<std::int64_t>(raw & (bits == 32 ? 0xffffffffu : (sign << 1) - 1));
        if (value & sign) value -= static_cast<std::int64_t>(sign) * 2;
        wav.samples[i] = static_cast<double>(value) / scale;
      }
    } else {
      throw fail("unsupported PCM bit depth " + std::to_string(bits));
    }
  } else if (format == kFormatFloat) {
    if (bits == 32) {
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t raw = le32(data + i * 4);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        wav.samples[i] = f;
      }
    } else if (bits == 64) {
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t raw = static_cast<std::uint64_t>(le32(data + i * 8)) |
                                  (static_cast<std::uint64_t>(le32(data + i * 8 + 4)) << 32);
        double d;
        std::memcpy(&d, &raw, sizeof d);
        wav.samples[i] = d;
      }
    } else {
      throw fail("unsupported float bit depth " + std::to_string(bits));
    }
  } else {
    throw fail("unsupported encoding (format tag " + std::to_string(format) + ")");
  }
  return wav;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               unsigned sample_rate, WavEncoding encoding) {
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t tag = encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat;
  const std::uint32_t block = bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * block);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put32(out, 36 + data_size);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, tag);
  put16(out, 1);
  put32(out, sample_rate);
  put32(out, sample_rate * block);
  put16(out, static_cast<std::uint16_t>(block));
  put16(out, bits);
  out += "data";
  put32(out, data_size);
  for (double s : samples) {
    if (encoding == WavEncoding::kPcm16) {
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      const float f = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      put32(out, raw);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace bsprop
