#pragma once

#include <string>
#include <utility>
#include <vector>

namespace apegen {

struct ZipEntry {
  std::string name;
  std::string data;
};

// Uncompressed (stored) ZIP archive. Timestamps are fixed at 1980-01-01 so the
// bytes depend on the entries only. Entries must be under 4 GiB.
std::string make_zip(const std::vector<ZipEntry>& entries);

// Reads back an archive produced by make_zip. Throws ParseError on anything
// else (compressed entries, bad signatures, CRC mismatch).
std::vector<ZipEntry> read_stored_zip(const std::string& archive);

}  // namespace apegen
