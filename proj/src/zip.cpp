#include "apegen/zip.hpp"

#include <zlib.h>

#include <cstdint>

#include "apegen/error.hpp"

namespace apegen {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t crc_of(const std::string& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
  }
  std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    return static_cast<std::uint32_t>(byte(at)) | (static_cast<std::uint32_t>(byte(at + 1)) << 8) |
           (static_cast<std::uint32_t>(byte(at + 2)) << 16) |
           (static_cast<std::uint32_t>(byte(at + 3)) << 24);
  }
  std::string bytes(std::size_t at, std::size_t n) const {
    need(at, n);
    return s_.substr(at, n);
  }

 private:
  unsigned byte(std::size_t at) const { return static_cast<unsigned char>(s_[at]); }
  void need(std::size_t at, std::size_t n) const {
    if (at + n > s_.size()) throw Error(ErrorCode::kParseError, "truncated zip archive");
  }
  const std::string& s_;
};

}  // namespace

std::string make_zip(const std::vector<ZipEntry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    const std::uint32_t crc = crc_of(e.data);
    const auto size = static_cast<std::uint32_t>(e.data.size());
    const auto name_len = static_cast<std::uint16_t>(e.name.size());
    const auto offset = static_cast<std::uint32_t>(out.size());

    put32(out, kLocalSig);
    put16(out, 20);  // version needed
    put16(out, 0x0800);  // UTF-8 names
    put16(out, 0);  // stored
    put16(out, 0);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);
    out += e.name;
    out += e.data;

    put32(central, kCentralSig);
    put16(central, 20);  // version made by
    put16(central, 20);
    put16(central, 0x0800);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, 0);  // external attrs
    put32(central, offset);
    central += e.name;
  }
  const auto central_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

std::vector<ZipEntry> read_stored_zip(const std::string& archive) {
  const Reader r(archive);
  if (archive.size() < 22) throw Error(ErrorCode::kParseError, "truncated zip archive");
  const std::size_t end = archive.size() - 22;
  if (r.u32(end) != kEndSig) {
    throw Error(ErrorCode::kParseError, "zip end-of-central-directory not found");
  }
  const std::size_t count = r.u16(end + 10);
  std::size_t at = r.u32(end + 16);
  std::vector<ZipEntry> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (r.u32(at) != kCentralSig) throw Error(ErrorCode::kParseError, "bad zip central header");
    if (r.u16(at + 10) != 0) throw Error(ErrorCode::kParseError, "compressed zip entry");
    const std::uint32_t crc = r.u32(at + 16);
    const std::uint32_t size = r.u32(at + 20);
    const std::size_t name_len = r.u16(at + 28);
    const std::size_t extra = r.u16(at + 30);
    const std::size_t comment = r.u16(at + 32);
    const std::size_t local = r.u32(at + 42);
    ZipEntry e;
    e.name = r.bytes(at + 46, name_len);
    if (r.u32(local) != kLocalSig) throw Error(ErrorCode::kParseError, "bad zip local header");
    const std::size_t data_at = local + 30 + r.u16(local + 26) + r.u16(local + 28);
    e.data = r.bytes(data_at, size);
    if (crc_of(e.data) != crc) throw Error(ErrorCode::kParseError, "zip CRC mismatch");
    out.push_back(std::move(e));
    at += 46 + name_len + extra + comment;
  }
  return out;
}

}  // namespace apegen
