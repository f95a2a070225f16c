#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "convring/channel.hpp"
#include "convring/cli.hpp"
#include "convring/errors.hpp"
#include "convring/harness.hpp"
#include "convring/io.hpp"
#include "convring/metrics.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace convring;
using namespace convring::testing;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "convring");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("convring_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

std::size_t count_erased(const Received& r) {
  std::size_t e = 0;
  for (const auto& s : r)
    for (const auto& x : s) e += !x;
  return e;
}

}  // namespace

TEST(Io, CodeRoundTrip) {
  for (const char* name : {"example2_code.json", "example3_code.json", "example4_code.json"}) {
    const ConvCode code = load_code(name);
    const std::string text = serialize_code(code);
    const ConvCode again = parse_code(text);
    EXPECT_EQ(serialize_code(again), text) << name;
    EXPECT_EQ(again.parity_check(), code.parity_check()) << name;
    EXPECT_EQ(again.observable(), code.observable()) << name;
  }
  const ConvCode g = generate_observable_code(RingContext(3, 2), 3, {1, 1}, 2, 7).code;
  const ConvCode g2 = parse_code(serialize_code(g));
  EXPECT_EQ(g2.generator(), g.generator());
  EXPECT_EQ(g2.parity_check(), g.parity_check());
}

TEST(Io, StreamAndPatternRoundTrip) {
  const StreamFile s = load_stream("example4_received.json");
  EXPECT_EQ(s.n, 5u);
  EXPECT_EQ(count_erased(s.symbols), 8u);
  const StreamFile again = parse_stream(serialize_stream(s));
  EXPECT_EQ(again.symbols, s.symbols);
  const ErasureList pattern = parse_pattern(read_file(data_path("example4_pattern.json")));
  EXPECT_EQ(parse_pattern(serialize_pattern(pattern)), pattern);
  EXPECT_NO_THROW(check_pattern(s, pattern));
  ErasureList wrong = pattern;
  wrong.pop_back();
  EXPECT_THROW(check_pattern(s, wrong), UsageError);
  wrong = pattern;
  wrong.push_back({1, 0});
  EXPECT_THROW(check_pattern(s, wrong), UsageError);
}

TEST(Io, ParseErrorsCarryPosition) {
  try {
    parse_code("{\n  \"p\": ,\n}");
    FAIL() << "no throw";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
  EXPECT_THROW(parse_code("{\"p\": 4, \"r\": 1, \"n\": 2, \"k_blocks\": [1], \"G\": [], \"H\": []}"), Error);
  EXPECT_THROW(parse_stream("{\"p\": 2, \"r\": 1, \"n\": 2, \"symbols\": [[0, 1], [1]]}"), ParseError);
  EXPECT_THROW(parse_stream("{\"p\": 2, \"r\": 1, \"n\": 2, \"symbols\": [[0, 5]]}"), ParseError);
  EXPECT_THROW(parse_pattern("{\"erasures\": [[0]]}"), ParseError);
  EXPECT_THROW(read_file("/nonexistent/convring.json"), UsageError);
}

TEST(Channel, Extremes) {
  StreamFile s{2, 2, 4, Received(50, ReceivedSlice(4, Residue{1}))};
  ChannelConfig cfg;
  cfg.eps = 0.0;
  StreamFile a = s;
  EXPECT_TRUE(apply_channel(a, cfg).empty());
  EXPECT_EQ(a.symbols, s.symbols);
  cfg.eps = 1.0;
  StreamFile b = s;
  EXPECT_EQ(apply_channel(b, cfg).size(), 200u);
  EXPECT_EQ(count_erased(b.symbols), 200u);
}

TEST(Channel, IidRateWithinThreeSigma) {
  const std::size_t n = 10, len = 2000;
  StreamFile s{2, 1, n, Received(len, ReceivedSlice(n, Residue{0}))};
  ChannelConfig cfg;
  cfg.eps = 0.3;
  cfg.seed = 99;
  const double count = static_cast<double>(apply_channel(s, cfg).size());
  const double total = static_cast<double>(n * len);
  EXPECT_NEAR(count / total, 0.3, 3 * std::sqrt(0.3 * 0.7 / total));
}

TEST(Channel, GilbertElliottStationaryRate) {
  StreamFile s{2, 1, 10, Received(4000, ReceivedSlice(10, Residue{0}))};
  ChannelConfig cfg;
  cfg.model = ChannelConfig::Model::GilbertElliott;
  cfg.loss_good = 0.0;
  cfg.loss_bad = 1.0;
  cfg.good_to_bad = 0.1;
  cfg.bad_to_good = 0.3;
  cfg.seed = 5;
  const double rate = static_cast<double>(apply_channel(s, cfg).size()) / 40000.0;
  EXPECT_NEAR(rate, 0.25, 0.03);
}

TEST(Channel, DeterministicAndValidated) {
  StreamFile s{3, 2, 3, Received(30, ReceivedSlice(3, Residue{4}))};
  ChannelConfig cfg;
  cfg.eps = 0.4;
  cfg.seed = 17;
  StreamFile a = s, b = s;
  EXPECT_EQ(apply_channel(a, cfg), apply_channel(b, cfg));
  EXPECT_EQ(a.symbols, b.symbols);
  cfg.eps = 1.5;
  EXPECT_THROW(validate(cfg), UsageError);
  cfg.eps = 0.1;
  cfg.bad_to_good = -0.1;
  EXPECT_THROW(validate(cfg), UsageError);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Generate, RejectsShapesAndIsDeterministic) {
  const RingContext z4(2, 2);
  EXPECT_THROW(generate_observable_code(z4, 3, {0, 0}, 1, 1), UsageError);
  EXPECT_THROW(generate_observable_code(z4, 3, {2, 1}, 1, 1), UsageError);
  const GeneratedCode a = generate_observable_code(z4, 4, {1, 1}, 2, 42);
  const GeneratedCode b = generate_observable_code(z4, 4, {1, 1}, 2, 42);
  EXPECT_EQ(serialize_code(a.code), serialize_code(b.code));
  EXPECT_TRUE(a.code.observable());
  EXPECT_EQ(a.code.k_blocks(), (std::vector<std::size_t>{1, 1}));
  EXPECT_GE(a.attempts, 1u);
}

TEST(Stats, EmptySummary) {
  const Summary s = summarize({});
  EXPECT_EQ(s.trials, 0u);
  EXPECT_FALSE(s.mean_list_size);
  const json j = json::parse(summary_to_json(s));
  EXPECT_TRUE(j["mean_list_size"].is_null());
  EXPECT_EQ(summary_to_csv(s), "e,rows,windows,unique,mean_list_size,mean_ops\n");
}

TEST(Stats, CleanChannelRecoversEverything) {
  const ConvCode code = generate_observable_code(RingContext(2, 2), 3, {1, 0}, 1, 3).code;
  TrialConfig cfg;
  cfg.length = 6;
  const Summary s = summarize(run_trials(code, cfg, 20, 8, 2));
  EXPECT_EQ(s.trials, 20u);
  EXPECT_EQ(s.recovered_trials, 20u);
  // Only slices with erasures open a window.
  EXPECT_EQ(s.windows, 0u);
}

TEST(Stats, AllUniqueMeanIsOne) {
  std::vector<TrialReport> reports(3);
  for (auto& r : reports) {
    r.recovered = true;
    for (std::size_t e = 1; e <= 2; ++e) {
      WindowReport w;
      w.e = e;
      w.rows = 4;
      w.ops = 10 * e;
      r.windows.push_back(w);
    }
  }
  const Summary s = summarize(reports);
  EXPECT_EQ(s.unique_windows, 6u);
  ASSERT_TRUE(s.mean_list_size);
  EXPECT_DOUBLE_EQ(*s.mean_list_size, 1.0);
  ASSERT_EQ(s.by_shape.size(), 2u);
  EXPECT_DOUBLE_EQ(s.by_shape[1].mean_ops, 20.0);
  EXPECT_EQ(s.total_ops, 90u);
}

TEST(Stats, IndependentOfThreadCount) {
  const ConvCode code = generate_observable_code(RingContext(3, 2), 3, {1, 1}, 1, 11).code;
  TrialConfig cfg;
  cfg.channel.eps = 0.2;
  cfg.length = 10;
  cfg.delay = 1;
  const auto one = run_trials(code, cfg, 40, 123, 1);
  const auto four = run_trials(code, cfg, 40, 123, 4);
  const std::string text = reports_to_json(one, 3);
  EXPECT_EQ(text, reports_to_json(four, 3));
  EXPECT_EQ(reports_to_json(reports_from_json(text), 3), text);
  const Summary s = summarize(one);
  std::size_t windows = 0;
  for (const auto& sh : s.by_shape) windows += sh.windows;
  EXPECT_EQ(windows, s.windows);
}

TEST(Probe, Slopes) {
  EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}), 2.0, 1e-9);
  EXPECT_NEAR(loglog_slope({2, 3, 5}, {4, 6, 10}), 1.0, 1e-9);
  const auto sweeps = run_cost_probe(7, 1);
  ASSERT_EQ(sweeps.size(), 3u);
  for (const auto& sw : sweeps) {
    EXPECT_EQ(sw.x.size(), sw.ops.size()) << sw.name;
    EXPECT_TRUE(sw.pass) << sw.name << " slope " << sw.slope;
  }
  EXPECT_TRUE(json::parse(probe_to_json(sweeps)).is_array() || json::parse(probe_to_json(sweeps)).is_object());
}

TEST(Cli, CheckAndDecode) {
  const CliRun chk = run_cli({"check", "--code", data_path("example2_code.json")});
  EXPECT_EQ(chk.code, 0);
  EXPECT_NE(chk.out.find("observable: false"), std::string::npos);

  const CliRun d = run_cli({"decode", "--code", data_path("example4_code.json"), "--received",
                            data_path("example4_received.json"), "--pattern",
                            data_path("example4_pattern.json"), "--at", "0", "-T", "2", "--limit", "3"});
  ASSERT_EQ(d.code, 0) << d.err;
  const json j = json::parse(d.out);
  EXPECT_EQ(j["kind"], "list");
  EXPECT_EQ(j["list_size"], 64);
  EXPECT_EQ(j["windows"].size(), 3u);
  EXPECT_TRUE(j["truncated"].get<bool>());

  const CliRun o = run_cli({"oracle", "--code", data_path("example4_code.json"), "--received",
                            data_path("example4_received.json"), "-T", "2", "--limit", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(json::parse(o.out)["list_size"], 64);
}

TEST(Cli, PipelineRoundTrip) {
  TempDir dir;
  const std::string code = dir.file("code.json"), sent = dir.file("sent.json");
  const std::string rx = dir.file("rx.json"), pattern = dir.file("pattern.json");
  ASSERT_EQ(run_cli({"gen", "--p", "3", "--r", "2", "--n", "3", "--k", "1,0", "--deg", "1", "--seed", "4",
                     "-o", code}).code, 0);
  ASSERT_EQ(run_cli({"encode", "--code", code, "--length", "8", "--seed", "2", "-o", sent}).code, 0);
  ASSERT_EQ(run_cli({"channel", "--received", sent, "--eps", "0", "-o", rx, "--pattern", pattern}).code, 0);
  const CliRun d = run_cli({"decode", "--code", code, "--received", rx, "--pattern", pattern, "-T", "2"});
  ASSERT_EQ(d.code, 0) << d.err;
  const json j = json::parse(d.out);
  EXPECT_EQ(j["status"], "complete");
  EXPECT_EQ(j["symbols"], json::parse(read_file(sent))["symbols"]);

  const CliRun st = run_cli({"stats", "--code", code, "--trials", "10", "--eps", "0.1", "--seed", "1",
                             "--format", "csv"});
  ASSERT_EQ(st.code, 0) << st.err;
  EXPECT_EQ(st.out.rfind("e,rows,windows,unique,mean_list_size,mean_ops\n", 0), 0u);
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"check"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  const CliRun bad = run_cli({"check", "--code", dir.write("bad.json", "{\n  \"p\": ,\n}")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run_cli({"gen", "--p", "2", "--r", "2", "--n", "3", "--k", "0,0"}).code, 2);
  EXPECT_EQ(run_cli({"check", "--code", dir.file("missing.json")}).code, 2);

  // A received word off the code: the window check fails.
  StreamFile s{2, 3, 5, Received(3, ReceivedSlice(5, Residue{0}))};
  s.symbols[0][0] = 1;
  const std::string rx = dir.write("rx.json", serialize_stream(s));
  EXPECT_EQ(run_cli({"decode", "--code", data_path("example4_code.json"), "--received", rx, "--at", "0",
                     "-T", "2"}).code, 1);
  EXPECT_EQ(run_cli({"oracle", "--code", data_path("example4_code.json"), "--received", rx, "-T", "2"}).code, 1);
}

// Within d_T^c - 1 erasures per window, sequential decoding recovers the word.
TEST(PipelineProperty, BoundedErasuresRecover) {
  std::mt19937_64 rng(61);
  int runs = 0, erased_total = 0;
  for (int t = 0; t < 30; ++t) {
    const RingContext ring = t % 2 ? RingContext(2, 2) : RingContext(3, 2);
    const ConvCode code = generate_observable_code(ring, 3 + t % 2, {1, 0}, 1, rng()).code;
    const std::size_t delay = 1 + t % 3, length = 10;
    const auto cd = column_distance(code, static_cast<unsigned>(delay));
    if (!cd || cd->distance < 2) continue;
    const std::size_t budget = cd->distance - 1;
    const Window sent = random_codeword_window(code, length, rng);
    Received rx = to_received(sent);
    std::vector<std::size_t> per_slice(length, 0);
    for (std::size_t i = 0; i + delay < length; ++i)
      for (std::size_t c = 0; c < code.n(); ++c) {
        if (rng() % 2) continue;
        // Every window of delay + 1 slices holding slice i stays within budget.
        bool ok = true;
        for (std::size_t a = i >= delay ? i - delay : 0; a <= i; ++a) {
          std::size_t sum = 1;
          for (std::size_t b = a; b <= a + delay && b < length; ++b) sum += per_slice[b];
          ok = ok && sum <= budget;
        }
        if (!ok) continue;
        rx[i][c] = std::nullopt;
        ++per_slice[i];
        ++erased_total;
      }
    const SequentialResult res = sequential_decode(code, rx, delay, ListPolicy::EmitListAndHalt);
    ASSERT_EQ(res.status, SequentialStatus::Complete) << "trial " << t;
    ASSERT_EQ(res.stream, to_received(sent)) << "trial " << t;
    ++runs;
  }
  EXPECT_GT(runs, 10);
  EXPECT_GT(erased_total, 20);
}
