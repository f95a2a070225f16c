#include "convring/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "convring/errors.hpp"
#include "convring/polynomial_forms.hpp"
#include "json.hpp"

namespace convring {

using nlohmann::json;

PolyMatrix random_poly_matrix(const RingContext& ring, std::size_t rows, std::size_t cols,
                              unsigned max_degree, Residue bound, std::mt19937_64& rng) {
  PolyMatrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<Residue> c(max_degree + 1);
      for (auto& x : c) x = rng() % bound;
      m.at(i, j) = Poly(ring, std::move(c));
    }
  return m;
}

static Residue level_bound(const RingContext& ring, unsigned level) {
  Residue b = 1;
  for (unsigned i = level; i < ring.r(); ++i) b *= ring.p();
  return b;
}

GeneratedCode generate_observable_code(const RingContext& ring, std::size_t n,
                                       const std::vector<std::size_t>& k_blocks, unsigned degree,
                                       std::uint64_t seed, std::size_t max_attempts) {
  if (k_blocks.size() != ring.r()) throw UsageError("need one block size per p-power level");
  std::size_t k = 0;
  for (auto v : k_blocks) k += v;
  if (k == 0) throw UsageError("k = 0 gives the zero code");
  if (k >= n) throw UsageError("need k < n");
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    std::vector<PolyMatrix> blocks;
    for (unsigned i = 0; i < ring.r(); ++i)
      blocks.push_back(random_poly_matrix(ring, k_blocks[i], n, degree, level_bound(ring, i), rng));
    PolyMatrix stack = blocks.front().project();
    for (unsigned i = 1; i < ring.r(); ++i) stack = PolyMatrix::vstack(stack, blocks[i].project());
    if (!is_left_prime(stack)) continue;
    ConvCode code = ConvCode::from_standard_blocks(ring, std::move(blocks));
    if (code.observable()) return {std::move(code), attempt};
  }
  throw GenerationFailed("no observable code after " + std::to_string(max_attempts) + " attempts");
}

std::optional<ConvCode> random_parity_code(const RingContext& ring, std::size_t n,
                                           const std::vector<std::size_t>& l_blocks,
                                           unsigned degree, std::mt19937_64& rng) {
  std::vector<PolyMatrix> blocks;
  for (unsigned i = 0; i < ring.r(); ++i)
    blocks.push_back(random_poly_matrix(ring, l_blocks[i], n, degree, level_bound(ring, i), rng));
  PolyMatrix stack = blocks.front().project();
  for (unsigned i = 1; i < ring.r(); ++i) stack = PolyMatrix::vstack(stack, blocks[i].project());
  if (stack.rows() >= n || !is_left_prime(stack)) return std::nullopt;
  return ConvCode::from_parity_check(ring, std::move(blocks));
}

Window random_codeword_window(const ConvCode& code, std::size_t length, std::mt19937_64& rng) {
  const RingContext& ring = code.ring();
  PolyVector u;
  for (std::size_t i = 0; i < code.k(); ++i) {
    std::vector<Residue> c(length);
    for (auto& x : c) x = rng() % ring.q();
    u.emplace_back(ring, std::move(c));
  }
  return to_window(encode(code, u), length);
}

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Unique: return "unique";
    case OutcomeKind::List: return "list";
    case OutcomeKind::Invalid: return "invalid";
  }
  return "?";
}

const char* to_string(SequentialStatus s) {
  switch (s) {
    case SequentialStatus::Complete: return "complete";
    case SequentialStatus::HaltedOnList: return "halted_on_list";
    case SequentialStatus::Invalid: return "invalid";
  }
  return "?";
}

static std::uint64_t saturating_power(std::uint64_t p, std::size_t e) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > UINT64_MAX / p) return UINT64_MAX;
    v *= p;
  }
  return v;
}

TrialReport run_trial(const ConvCode& code, const TrialConfig& cfg, std::size_t index,
                      std::uint64_t master_seed) {
  TrialReport rep;
  rep.trial = index;
  rep.seed = derive_seed(master_seed, index);
  std::mt19937_64 rng(rep.seed);
  const Window sent = random_codeword_window(code, cfg.length, rng);

  StreamFile stream{code.ring().p(), code.ring().r(), code.n(), to_received(sent)};
  ChannelConfig ch = cfg.channel;
  ch.seed = rng();
  rep.erasures = apply_channel(stream, ch).size();

  const SequentialResult res = sequential_decode(code, stream.symbols, cfg.delay, cfg.policy);
  rep.status = res.status;
  rep.recovered = res.status == SequentialStatus::Complete && res.stream == to_received(sent);
  for (const auto& s : res.steps) {
    WindowReport w;
    w.time = s.time;
    w.end = s.window_end;
    w.e = s.erasures;
    w.rows = s.rows;
    w.ranks = s.ranks;
    w.kind = s.kind;
    w.log_list_size = s.log_list_size;
    w.list_size = s.kind == OutcomeKind::Invalid ? 0 : saturating_power(code.ring().p(), s.log_list_size);
    w.ops = s.ops;
    if (cfg.timing) w.wall_ms = s.wall_ms;
    rep.windows.push_back(std::move(w));
  }
  return rep;
}

std::vector<TrialReport> run_trials(const ConvCode& code, const TrialConfig& cfg, std::size_t count,
                                    std::uint64_t master_seed, unsigned threads) {
  validate(cfg.channel);
  if (!code.has_generator()) throw UsageError("trials need a code with a generator matrix");
  std::vector<TrialReport> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < count; i = next++) out[i] = run_trial(code, cfg, i, master_seed);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

static OutcomeKind kind_from(const std::string& s) {
  if (s == "unique") return OutcomeKind::Unique;
  if (s == "list") return OutcomeKind::List;
  if (s == "invalid") return OutcomeKind::Invalid;
  throw ParseError("unknown outcome kind '" + s + "'");
}

static SequentialStatus status_from(const std::string& s) {
  if (s == "complete") return SequentialStatus::Complete;
  if (s == "halted_on_list") return SequentialStatus::HaltedOnList;
  if (s == "invalid") return SequentialStatus::Invalid;
  throw ParseError("unknown trial status '" + s + "'");
}

std::string reports_to_json(const std::vector<TrialReport>& reports, std::uint64_t p) {
  json arr = json::array();
  for (const auto& r : reports) {
    json ws = json::array();
    for (const auto& w : r.windows) {
      json j = {{"time", w.time},   {"end", w.end},
                {"e", w.e},         {"rows", w.rows},
                {"ranks", w.ranks}, {"kind", to_string(w.kind)},
                {"log_list_size", w.log_list_size},
                {"list_size", w.list_size},
                {"ops", w.ops}};
      if (w.wall_ms) j["wall_ms"] = *w.wall_ms;
      ws.push_back(std::move(j));
    }
    arr.push_back({{"trial", r.trial},
                   {"seed", r.seed},
                   {"erasures", r.erasures},
                   {"status", to_string(r.status)},
                   {"recovered", r.recovered},
                   {"windows", std::move(ws)}});
  }
  return json{{"p", p}, {"trials", std::move(arr)}}.dump(2) + "\n";
}

std::vector<TrialReport> reports_from_json(const std::string& text) {
  std::vector<TrialReport> out;
  try {
    const json doc = json::parse(text);
    for (const auto& t : doc.at("trials")) {
      TrialReport r;
      r.trial = t.at("trial").get<std::size_t>();
      r.seed = t.at("seed").get<std::uint64_t>();
      r.erasures = t.at("erasures").get<std::size_t>();
      r.status = status_from(t.at("status").get<std::string>());
      r.recovered = t.at("recovered").get<bool>();
      for (const auto& j : t.at("windows")) {
        WindowReport w;
        w.time = j.at("time").get<std::size_t>();
        w.end = j.at("end").get<std::size_t>();
        w.e = j.at("e").get<std::size_t>();
        w.rows = j.at("rows").get<std::size_t>();
        w.ranks = j.at("ranks").get<std::vector<std::size_t>>();
        w.kind = kind_from(j.at("kind").get<std::string>());
        w.log_list_size = j.at("log_list_size").get<std::size_t>();
        w.list_size = j.at("list_size").get<std::uint64_t>();
        w.ops = j.at("ops").get<std::uint64_t>();
        if (j.contains("wall_ms")) w.wall_ms = j.at("wall_ms").get<double>();
        r.windows.push_back(std::move(w));
      }
      out.push_back(std::move(r));
    }
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed report file: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad report file: ") + e.what());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.trial < b.trial; });
  return out;
}

Summary summarize(const std::vector<TrialReport>& reports) {
  Summary s;
  s.trials = reports.size();
  struct Acc {
    std::size_t windows = 0, unique = 0, listed = 0;
    double list_sum = 0.0, ops_sum = 0.0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Acc> shapes;
  double list_sum = 0.0;
  std::size_t listed = 0;
  for (const auto& r : reports) {
    if (r.recovered) ++s.recovered_trials;
    for (const auto& w : r.windows) {
      ++s.windows;
      s.total_ops += w.ops;
      Acc& a = shapes[{w.e, w.rows}];
      ++a.windows;
      a.ops_sum += static_cast<double>(w.ops);
      if (w.kind == OutcomeKind::Unique) {
        ++s.unique_windows;
        ++a.unique;
      }
      if (w.kind == OutcomeKind::Invalid) {
        ++s.invalid_windows;
        continue;
      }
      list_sum += static_cast<double>(w.list_size);
      a.list_sum += static_cast<double>(w.list_size);
      ++listed;
      ++a.listed;
    }
  }
  if (listed > 0) s.mean_list_size = list_sum / static_cast<double>(listed);
  for (const auto& [key, a] : shapes)
    s.by_shape.push_back({key.first, key.second, a.windows, a.unique,
                          a.listed ? a.list_sum / static_cast<double>(a.listed) : 0.0,
                          a.ops_sum / static_cast<double>(a.windows)});
  return s;
}

std::string summary_to_json(const Summary& s) {
  json shapes = json::array();
  for (const auto& b : s.by_shape)
    shapes.push_back({{"e", b.e},
                      {"rows", b.rows},
                      {"windows", b.windows},
                      {"unique", b.unique},
                      {"mean_list_size", b.mean_list_size},
                      {"mean_ops", b.mean_ops}});
  json j = {{"trials", s.trials},
            {"recovered_trials", s.recovered_trials},
            {"windows", s.windows},
            {"unique_windows", s.unique_windows},
            {"invalid_windows", s.invalid_windows},
            {"unique_rate", s.windows ? json(static_cast<double>(s.unique_windows) /
                                             static_cast<double>(s.windows))
                                      : json(nullptr)},
            {"mean_list_size", s.mean_list_size ? json(*s.mean_list_size) : json(nullptr)},
            {"total_ops", s.total_ops},
            {"by_shape", std::move(shapes)}};
  return j.dump(2) + "\n";
}

std::string summary_to_csv(const Summary& s) {
  std::ostringstream os;
  os << "e,rows,windows,unique,mean_list_size,mean_ops\n";
  for (const auto& b : s.by_shape)
    os << b.e << ',' << b.rows << ',' << b.windows << ',' << b.unique << ','
       << json(b.mean_list_size).dump() << ',' << json(b.mean_ops).dump() << '\n';
  return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("slope needs two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

struct ProbePoint {
  std::uint64_t p;
  unsigned r;
  std::size_t n, m, delay, e;
  unsigned degree;
  // Erase only within w^0, so every row of the window meets an unknown.
  bool first_slice = false;
};

// Mean multiply-accumulate count of one window decode.
double probe_ops(const ProbePoint& pt, std::uint64_t seed, unsigned repeats) {
  const RingContext ring(pt.p, pt.r);
  double total = 0.0;
  for (unsigned rep = 0; rep < repeats; ++rep) {
    std::mt19937_64 rng(derive_seed(seed, rep));
    std::vector<PolyMatrix> blocks{random_poly_matrix(ring, pt.m, pt.n, pt.degree, ring.q(), rng)};
    for (unsigned i = 1; i < ring.r(); ++i) blocks.emplace_back(ring, 0, pt.n);
    const ConvCode code = ConvCode::from_parity_check(ring, std::move(blocks), false);

    // Zero word: every window is consistent, so no early exit skews the count.
    const std::size_t slots = (pt.first_slice ? 1 : pt.delay + 1) * pt.n;
    std::vector<std::size_t> idx(slots);
    for (std::size_t i = 0; i < slots; ++i) idx[i] = i;
    for (std::size_t i = 0; i < pt.e; ++i) std::swap(idx[i], idx[i + rng() % (slots - i)]);
    Received rx(pt.delay + 1, ReceivedSlice(pt.n, Residue{0}));
    for (std::size_t i = 0; i < pt.e; ++i) rx[idx[i] / pt.n][idx[i] % pt.n].reset();

    const WindowSystem sys = build_window_system(code, rx, 0, pt.delay);
    total += static_cast<double>(list_decode(sys).ops.mac);
  }
  return total / repeats;
}

}  // namespace

std::vector<ProbeSweep> run_cost_probe(std::uint64_t seed, unsigned repeats) {
  std::vector<ProbeSweep> out;

  // e for fixed rows (n-k)(T+1) = 64; elimination on R x e with e <= R costs R e^2.
  ProbeSweep se{"erasures", {}, {}, 0.0, 2.0, false};
  for (std::size_t e = 4; e <= 40; e += 4) {
    se.x.push_back(static_cast<double>(e));
    se.ops.push_back(probe_ops({2, 2, 48, 16, 3, e, 3}, derive_seed(seed, e), repeats));
  }
  out.push_back(std::move(se));

  // Rows for fixed e = 8: linear in R. The degree covers the whole window so
  // that no row drops out for lack of erased columns.
  ProbeSweep sr{"rows", {}, {}, 0.0, 1.0, false};
  for (std::size_t t = 0; t <= 9; ++t) {
    sr.x.push_back(static_cast<double>(8 * (t + 1)));
    sr.ops.push_back(probe_ops({2, 2, 16, 8, t, 8, 9, true}, derive_seed(seed, 100 + t), repeats));
  }
  out.push_back(std::move(sr));

  // One elimination per digit stage: linear in r.
  ProbeSweep sq{"levels", {}, {}, 0.0, 1.0, false};
  for (unsigned r = 1; r <= 10; ++r) {
    sq.x.push_back(static_cast<double>(r));
    sq.ops.push_back(probe_ops({2, r, 16, 8, 3, 16, 2}, derive_seed(seed, 200 + r), repeats));
  }
  out.push_back(std::move(sq));

  for (auto& s : out) {
    s.slope = loglog_slope(s.x, s.ops);
    s.pass = std::abs(s.slope - s.model_slope) <= 0.3;
  }
  return out;
}

std::string probe_to_json(const std::vector<ProbeSweep>& sweeps) {
  json arr = json::array();
  for (const auto& s : sweeps)
    arr.push_back({{"sweep", s.name},
                   {"x", s.x},
                   {"mean_ops", s.ops},
                   {"slope", s.slope},
                   {"model_slope", s.model_slope},
                   {"pass", s.pass}});
  return json{{"sweeps", std::move(arr)}}.dump(2) + "\n";
}

}  // namespace convring
