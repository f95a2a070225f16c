#include "convring/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "convring/errors.hpp"
#include "json.hpp"

namespace convring {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, column] = line_column(text, offset);
    throw ParseError("malformed JSON", line, column);
  }
}

// Semantic errors point at the first occurrence of the field name.
[[noreturn]] void fail(const std::string& text, const std::string& key, const std::string& what) {
  const auto pos = text.find('"' + key + '"');
  if (pos == std::string::npos) throw ParseError(what);
  auto [line, column] = line_column(text, pos);
  throw ParseError(what, line, column);
}

const json& field(const json& doc, const std::string& text, const std::string& key) {
  if (!doc.is_object()) throw ParseError("document is not a JSON object", 1, 1);
  auto it = doc.find(key);
  if (it == doc.end()) fail(text, key, "missing field \"" + key + "\"");
  return *it;
}

std::int64_t integer(const json& v, const std::string& text, const std::string& key) {
  if (!v.is_number_integer()) fail(text, key, "field \"" + key + "\" must hold integers");
  return v.get<std::int64_t>();
}

std::uint64_t natural(const json& doc, const std::string& text, const std::string& key) {
  const std::int64_t v = integer(field(doc, text, key), text, key);
  if (v < 0) fail(text, key, "field \"" + key + "\" must be non-negative");
  return static_cast<std::uint64_t>(v);
}

RingContext ring_of(const json& doc, const std::string& text) {
  const auto p = natural(doc, text, "p");
  const auto r = natural(doc, text, "r");
  try {
    return RingContext(p, static_cast<unsigned>(r));
  } catch (const UsageError& e) {
    fail(text, "p", e.what());
  }
}

PolyMatrix poly_rows(const json& rows, const RingContext& ring, std::size_t n, const std::string& text,
                     const std::string& key) {
  if (!rows.is_array()) fail(text, key, "field \"" + key + "\" must be an array of rows");
  PolyMatrix m(ring, rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n)
      fail(text, key, "row " + std::to_string(i) + " of \"" + key + "\" must hold n polynomials");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_array()) fail(text, key, "polynomials in \"" + key + "\" are integer arrays");
      std::vector<std::int64_t> c;
      for (const auto& x : row[j]) c.push_back(integer(x, text, key));
      m.at(i, j) = Poly::from_integers(ring, c);
    }
  }
  return m;
}

std::vector<PolyMatrix> split_blocks(const PolyMatrix& m, const std::vector<std::size_t>& sizes) {
  std::vector<PolyMatrix> out;
  std::size_t at = 0;
  for (auto s : sizes) {
    out.push_back(m.row_range(at, s));
    at += s;
  }
  return out;
}

void write_poly(std::ostream& os, const Poly& f) {
  os << '[';
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) os << (i ? ", " : "") << f.coeffs()[i];
  os << ']';
}

void write_rows(std::ostream& os, const std::vector<PolyMatrix>& blocks) {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.rows();
  if (total == 0) {
    os << "[]";
    return;
  }
  os << "[\n";
  std::size_t written = 0;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.rows(); ++i) {
      os << "    [";
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (j) os << ", ";
        write_poly(os, b.at(i, j));
      }
      os << (++written < total ? "],\n" : "]\n");
    }
  os << "  ]";
}

}  // namespace

ConvCode parse_code(const std::string& text) {
  const json doc = parse_json(text);
  const RingContext ring = ring_of(doc, text);
  const std::size_t n = natural(doc, text, "n");
  if (n == 0) fail(text, "n", "code length must be positive");
  const json& kb = field(doc, text, "k_blocks");
  if (!kb.is_array() || kb.size() != ring.r()) fail(text, "k_blocks", "k_blocks must list r block sizes");
  std::vector<std::size_t> k_blocks;
  std::size_t k = 0;
  for (const auto& v : kb) {
    const auto x = integer(v, text, "k_blocks");
    if (x < 0) fail(text, "k_blocks", "block sizes must be non-negative");
    k_blocks.push_back(static_cast<std::size_t>(x));
    k += k_blocks.back();
  }
  if (k > n) fail(text, "k_blocks", "block sizes exceed the code length");
  const PolyMatrix g = poly_rows(field(doc, text, "G"), ring, n, text, "G");
  const PolyMatrix h = poly_rows(field(doc, text, "H"), ring, n, text, "H");
  std::vector<std::size_t> l_blocks(ring.r());
  l_blocks[0] = n - k;
  for (unsigned i = 1; i < ring.r(); ++i) l_blocks[i] = k_blocks[ring.r() - i];
  if (g.rows() != 0 && g.rows() != k) fail(text, "G", "G row count does not match k_blocks");
  if (h.rows() != 0 && h.rows() != n - k_blocks[0])
    fail(text, "H", "H row count does not match k_blocks");
  if (g.rows() == 0 && h.rows() == 0) fail(text, "G", "either G or H must be given");

  std::optional<ConvCode> code;
  try {
    if (g.rows() != 0 && h.rows() != 0)
      code = ConvCode::from_blocks(ring, split_blocks(g, k_blocks), split_blocks(h, l_blocks));
    else if (g.rows() != 0)
      code = ConvCode::from_standard_blocks(ring, split_blocks(g, k_blocks));
    else
      code = ConvCode::from_parity_check(ring, split_blocks(h, l_blocks));
  } catch (const ConstructionError& e) {
    fail(text, g.rows() != 0 ? "G" : "H", e.what());
  }
  if (code->k_blocks() != k_blocks) fail(text, "k_blocks", "k_blocks disagree with the parity-check blocks");
  const auto nu = natural(doc, text, "nu");
  if (static_cast<int>(nu) != code->nu())
    fail(text, "nu", "nu is " + std::to_string(nu) + " but H has degree " + std::to_string(code->nu()));
  return std::move(*code);
}

std::string serialize_code(const ConvCode& code) {
  std::ostringstream os;
  os << "{\n  \"p\": " << code.ring().p() << ",\n  \"r\": " << code.ring().r() << ",\n  \"n\": " << code.n()
     << ",\n  \"k_blocks\": [";
  for (std::size_t i = 0; i < code.k_blocks().size(); ++i) os << (i ? ", " : "") << code.k_blocks()[i];
  os << "],\n  \"G\": ";
  write_rows(os, code.g_blocks());
  os << ",\n  \"H\": ";
  write_rows(os, code.h_blocks());
  os << ",\n  \"nu\": " << code.nu() << "\n}\n";
  return os.str();
}

StreamFile parse_stream(const std::string& text) {
  const json doc = parse_json(text);
  const RingContext ring = ring_of(doc, text);
  StreamFile s;
  s.p = ring.p();
  s.r = ring.r();
  s.n = natural(doc, text, "n");
  const json& sym = field(doc, text, "symbols");
  if (!sym.is_array()) fail(text, "symbols", "symbols must be an array of slices");
  for (const auto& slice : sym) {
    if (!slice.is_array() || slice.size() != s.n) fail(text, "symbols", "every slice must hold n symbols");
    ReceivedSlice out;
    for (const auto& v : slice) {
      if (v.is_null()) {
        out.emplace_back();
        continue;
      }
      const auto x = integer(v, text, "symbols");
      if (x < 0 || static_cast<std::uint64_t>(x) >= ring.q()) fail(text, "symbols", "symbol outside [0, p^r)");
      out.emplace_back(static_cast<Residue>(x));
    }
    s.symbols.push_back(std::move(out));
  }
  return s;
}

std::string serialize_stream(const StreamFile& s) {
  std::ostringstream os;
  os << "{\n  \"p\": " << s.p << ",\n  \"r\": " << s.r << ",\n  \"n\": " << s.n << ",\n  \"symbols\": [";
  for (std::size_t t = 0; t < s.symbols.size(); ++t) {
    os << (t ? ",\n    [" : "\n    [");
    for (std::size_t c = 0; c < s.symbols[t].size(); ++c) {
      if (c) os << ", ";
      if (s.symbols[t][c]) os << *s.symbols[t][c];
      else os << "null";
    }
    os << ']';
  }
  os << (s.symbols.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

ErasureList parse_pattern(const std::string& text) {
  const json doc = parse_json(text);
  const json& list = field(doc, text, "erasures");
  if (!list.is_array()) fail(text, "erasures", "erasures must be an array of [time, coordinate] pairs");
  ErasureList out;
  for (const auto& pair : list) {
    if (!pair.is_array() || pair.size() != 2) fail(text, "erasures", "each erasure is a [time, coordinate] pair");
    const auto t = integer(pair[0], text, "erasures");
    const auto c = integer(pair[1], text, "erasures");
    if (t < 0 || c < 0) fail(text, "erasures", "erasure positions must be non-negative");
    out.emplace_back(static_cast<std::size_t>(t), static_cast<std::size_t>(c));
  }
  return out;
}

std::string serialize_pattern(const ErasureList& erasures) {
  std::ostringstream os;
  os << "{\n  \"erasures\": [";
  for (std::size_t i = 0; i < erasures.size(); ++i)
    os << (i ? ", " : "") << '[' << erasures[i].first << ", " << erasures[i].second << ']';
  os << "]\n}\n";
  return os.str();
}

void check_pattern(const StreamFile& s, const ErasureList& erasures) {
  std::set<std::pair<std::size_t, std::size_t>> listed(erasures.begin(), erasures.end());
  if (listed.size() != erasures.size()) throw UsageError("pattern lists an erasure twice");
  for (const auto& [t, c] : listed) {
    if (t >= s.symbols.size() || c >= s.n)
      throw UsageError("pattern erasure (" + std::to_string(t) + ", " + std::to_string(c) + ") is out of range");
    if (s.symbols[t][c])
      throw UsageError("pattern erases (" + std::to_string(t) + ", " + std::to_string(c) +
                       ") but the stream holds a value there");
  }
  for (std::size_t t = 0; t < s.symbols.size(); ++t)
    for (std::size_t c = 0; c < s.n; ++c)
      if (!s.symbols[t][c] && !listed.count({t, c}))
        throw UsageError("stream erases (" + std::to_string(t) + ", " + std::to_string(c) +
                         ") but the pattern does not");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace convring
