#pragma once

#include <string>
#include <utility>
#include <vector>

#include "convring/code.hpp"
#include "convring/decoder.hpp"

namespace convring {

/// Code documents: {"p","r","n","k_blocks","G","H","nu"}. G and H hold the
/// unscaled block rows stacked in level order; each row lists n polynomials
/// as degree-ascending integer arrays. Either G or H may be empty.
ConvCode parse_code(const std::string& text);
/// Canonical text; parse_code(serialize_code(c)) re-serializes identically.
std::string serialize_code(const ConvCode& code);

/// Received or transmitted streams: {"p","r","n","symbols"}, null = erased.
struct StreamFile {
  std::uint64_t p = 2;
  unsigned r = 1;
  std::size_t n = 0;
  Received symbols;
};

StreamFile parse_stream(const std::string& text);
std::string serialize_stream(const StreamFile& s);

/// Pattern documents: {"erasures": [[time, coordinate], ...]}.
using ErasureList = std::vector<std::pair<std::size_t, std::size_t>>;
ErasureList parse_pattern(const std::string& text);
std::string serialize_pattern(const ErasureList& erasures);

/// Checks that the pattern names exactly the null symbols of the stream.
/// Throws UsageError on conflict.
void check_pattern(const StreamFile& s, const ErasureList& erasures);

/// Reads a whole file; throws UsageError when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace convring
