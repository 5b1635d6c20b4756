#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "qiren/data/dataset.hpp"

namespace qiren {

namespace {

uint32_t rd_u32(const uint8_t* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}
uint16_t rd_u16(const uint8_t* p) { return uint16_t(p[0] | p[1] << 8); }

}  // namespace

std::vector<double> wav_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error(path + ": not a RIFF/WAVE file");

  int bits = 0, channels = 0, format = 0;
  const uint8_t* data = nullptr;
  size_t data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const char* id = reinterpret_cast<const char*>(&buf[pos]);
    const uint32_t len = rd_u32(&buf[pos + 4]);
    pos += 8;
    if (pos + len > buf.size())
      throw std::runtime_error(path + ": truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw std::runtime_error(path + ": short fmt chunk");
      format = rd_u16(&buf[pos]);
      channels = rd_u16(&buf[pos + 2]);
      bits = rd_u16(&buf[pos + 14]);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = &buf[pos];
      data_len = len;
    }
    pos += len + (len & 1);  // chunks are word-aligned
  }
  if (!data) throw std::runtime_error(path + ": no data chunk");
  if (format != 1) throw std::runtime_error(path + ": only PCM supported");
  if (channels != 1) throw std::runtime_error(path + ": only mono supported");

  std::vector<double> out;
  if (bits == 8) {
    out.reserve(data_len);
    for (size_t i = 0; i < data_len; ++i)
      out.push_back(double(data[i]) - 128.0);
  } else if (bits == 16) {
    out.reserve(data_len / 2);
    for (size_t i = 0; i + 1 < data_len; i += 2) {
      const int16_t v = int16_t(uint16_t(data[i]) | uint16_t(data[i + 1]) << 8);
      out.push_back(double(v));
    }
  } else {
    throw std::runtime_error(path + ": only 8/16-bit PCM supported");
  }
  return out;
}

void wav_write_16(const std::string& path, const std::vector<double>& samples,
                  int sample_rate) {
  std::vector<uint8_t> pcm;
  pcm.reserve(samples.size() * 2);
  for (double s : samples) {
    double c = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
    const int v = int(c >= 0 ? c * 32767.0 + 0.5 : c * 32768.0 - 0.5);
    pcm.push_back(uint8_t(v & 0xff));
    pcm.push_back(uint8_t((v >> 8) & 0xff));
  }
  const uint32_t data_len = uint32_t(pcm.size());
  const uint32_t byte_rate = uint32_t(sample_rate) * 2;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto u32 = [&](uint32_t v) {
    char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
    out.write(b, 4);
  };
  auto u16 = [&](uint16_t v) {
    char b[2] = {char(v), char(v >> 8)};
    out.write(b, 2);
  };
  out.write("RIFF", 4);
  u32(36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);  // PCM
  u16(1);  // mono
  u32(uint32_t(sample_rate));
  u32(byte_rate);
  u16(2);   // block align
  u16(16);  // bits
  out.write("data", 4);
  u32(data_len);
  out.write(reinterpret_cast<const char*>(pcm.data()),
            std::streamsize(pcm.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace qiren
