#include "convring/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "convring/errors.hpp"
#include "convring/harness.hpp"
#include "convring/io.hpp"
#include "convring/metrics.hpp"
#include "json.hpp"

namespace convring {

using nlohmann::json;

namespace {

// Raised after the result has been written, to select exit code 1.
struct DecodeInvalid {};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

StreamFile load_stream_for(const ConvCode& code, const std::string& path, const std::string& pattern) {
  StreamFile s = parse_stream(read_file(path));
  if (s.p != code.ring().p() || s.r != code.ring().r() || s.n != code.n())
    throw UsageError("stream does not match the code's p, r or n");
  if (!pattern.empty()) check_pattern(s, parse_pattern(read_file(pattern)));
  return s;
}

json window_json(const Window& w) {
  json j = json::array();
  for (const auto& s : w) j.push_back(s);
  return j;
}

json symbols_json(const Received& rx) {
  json j = json::array();
  for (const auto& slice : rx) {
    json row = json::array();
    for (const auto& v : slice) row.push_back(v ? json(*v) : json(nullptr));
    j.push_back(std::move(row));
  }
  return j;
}

ListPolicy policy_from(const std::string& s) {
  if (s == "halt") return ListPolicy::EmitListAndHalt;
  if (s == "first") return ListPolicy::PickFirst;
  if (s == "branch") return ListPolicy::PickAndBranchBounded;
  throw UsageError("unknown policy '" + s + "'");
}

struct Options {
  std::string code, received, pattern, output, input, reports, format = "json", model = "iid",
                                                                 policy = "halt", k_list;
  std::optional<std::size_t> at;
  std::size_t delay = 0, limit = 16, length = 8, trials = 0, attempts = 200;
  std::uint64_t seed = 0, p = 2;
  unsigned r = 1, deg = 1, threads = 0, distances = 0;
  std::size_t n = 2;
  double eps = 0.0, ge_loss_good = 0.0, ge_loss_bad = 1.0, ge_g2b = 0.0, ge_b2g = 1.0;
  bool probe = false, timing = false;
};

ChannelConfig channel_from(const Options& o) {
  ChannelConfig c;
  if (o.model == "iid") {
    c.model = ChannelConfig::Model::Iid;
  } else if (o.model == "ge") {
    c.model = ChannelConfig::Model::GilbertElliott;
  } else {
    throw UsageError("unknown channel model '" + o.model + "'");
  }
  c.eps = o.eps;
  c.loss_good = o.ge_loss_good;
  c.loss_bad = o.ge_loss_bad;
  c.good_to_bad = o.ge_g2b;
  c.bad_to_good = o.ge_b2g;
  c.seed = o.seed;
  validate(c);
  return c;
}

void run_gen(const Options& o, std::ostream& out) {
  const RingContext ring(o.p, o.r);
  std::vector<std::size_t> k;
  std::stringstream ss(o.k_list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      k.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw UsageError("bad block size '" + item + "'");
    }
  }
  const GeneratedCode g = generate_observable_code(ring, o.n, k, o.deg, o.seed, o.attempts);
  emit(out, o.output, serialize_code(g.code));
}

void run_check(const Options& o, std::ostream& out) {
  const ConvCode code = parse_code(read_file(o.code));
  out << "p: " << code.ring().p() << "\nr: " << code.ring().r() << "\nn: " << code.n()
      << "\nk: " << code.k() << "\nnu: " << code.nu()
      << "\nobservable: " << (code.observable() ? "true" : "false")
      << "\ngenerator: " << (code.has_generator() ? "yes" : "no") << '\n';
  for (unsigned j = 0; j < o.distances; ++j) {
    const auto d = column_distance(code, j);
    out << "d_" << j << "^c: ";
    if (d) {
      out << d->distance << '\n';
    } else {
      out << "none\n";
    }
  }
}

void run_encode(const Options& o, std::ostream& out) {
  const ConvCode code = parse_code(read_file(o.code));
  if (!code.has_generator()) throw UsageError("code has no generator matrix");
  std::mt19937_64 rng(o.seed);
  const Window w = random_codeword_window(code, o.length, rng);
  emit(out, o.output, serialize_stream({code.ring().p(), code.ring().r(), code.n(), to_received(w)}));
}

void run_channel(const Options& o, std::ostream& out) {
  const ChannelConfig cfg = channel_from(o);
  StreamFile s = parse_stream(read_file(o.received));
  const ErasureList erased = apply_channel(s, cfg);
  emit(out, o.output, serialize_stream(s));
  if (!o.pattern.empty()) emit(out, o.pattern, serialize_pattern(erased));
}

void run_decode(const Options& o, std::ostream& out) {
  const ConvCode code = parse_code(read_file(o.code));
  const StreamFile s = load_stream_for(code, o.received, o.pattern);
  if (!o.at) {
    const SequentialResult res = sequential_decode(code, s.symbols, o.delay, policy_from(o.policy));
    json steps = json::array();
    for (const auto& st : res.steps)
      steps.push_back({{"time", st.time},
                       {"end", st.window_end},
                       {"e", st.erasures},
                       {"kind", to_string(st.kind)},
                       {"log_list_size", st.log_list_size},
                       {"ops", st.ops}});
    json j = {{"status", to_string(res.status)}, {"symbols", symbols_json(res.stream)}, {"steps", steps}};
    emit(out, o.output, j.dump(2) + "\n");
    if (res.status == SequentialStatus::Invalid) throw DecodeInvalid{};
    return;
  }

  const WindowSystem sys = build_window_system(code, s.symbols, *o.at, o.delay);
  const DecodeOutcome oc = list_decode(sys);
  json stages = json::array();
  for (const auto& st : oc.stages)
    stages.push_back({{"stage", st.stage},
                      {"rank", st.rank},
                      {"new_parameters", st.new_parameters},
                      {"constraints_fired", st.constraints_fired}});
  json j = {{"time", sys.start}, {"end", sys.end},   {"erasures", sys.e()},
            {"kind", to_string(oc.kind)}, {"stages", stages}, {"ops", oc.ops.mac}};
  if (oc.kind == OutcomeKind::Invalid) {
    j["invalid_stage"] = oc.invalid_stage ? json(*oc.invalid_stage) : json(nullptr);
    j["reason"] = oc.invalid_reason;
    emit(out, o.output, j.dump(2) + "\n");
    throw DecodeInvalid{};
  }
  j["log_list_size"] = oc.log_list_size();
  j["list_size"] = oc.list_size(code.ring().p());
  j["constraints_fired"] = oc.constraints_fired;
  const MaterializedList list = materialize_list(sys, oc, s.symbols, o.limit);
  json sols = json::array();
  for (const auto& w : list.windows) sols.push_back(window_json(w));
  j["windows"] = std::move(sols);
  j["truncated"] = list.truncated;
  emit(out, o.output, j.dump(2) + "\n");
}

void run_oracle(const Options& o, std::ostream& out) {
  const ConvCode code = parse_code(read_file(o.code));
  const StreamFile s = load_stream_for(code, o.received, o.pattern);
  const std::size_t at = o.at.value_or(0);
  const WindowSystem sys = build_window_system(code, s.symbols, at, o.delay);
  const auto sols = oracle_decode(code, s.symbols, at, o.delay);
  json unknowns = json::array();
  for (const auto& [t, c] : sys.unknowns) unknowns.push_back({t, c});
  json listed = json::array();
  for (std::size_t i = 0; i < sols.size() && i < o.limit; ++i) listed.push_back(sols[i]);
  json j = {{"unknowns", unknowns}, {"list_size", sols.size()}, {"solutions", listed},
            {"truncated", sols.size() > o.limit}};
  emit(out, o.output, j.dump(2) + "\n");
  if (sols.empty()) throw DecodeInvalid{};
}

void run_stats(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format != "json" && o.format != "csv") throw UsageError("format must be json or csv");
  if (o.probe) {
    const auto sweeps = run_cost_probe(o.seed);
    emit(out, o.output, probe_to_json(sweeps));
    for (const auto& sw : sweeps)
      if (!sw.pass) {
        err << "probe sweep '" << sw.name << "' slope " << sw.slope << " is off the model "
            << sw.model_slope << '\n';
        throw DecodeInvalid{};
      }
    return;
  }
  std::vector<TrialReport> reports;
  if (!o.input.empty()) {
    reports = reports_from_json(read_file(o.input));
  } else if (o.trials > 0) {
    if (o.code.empty()) throw UsageError("--trials needs --code");
    const ConvCode code = parse_code(read_file(o.code));
    TrialConfig cfg;
    cfg.channel = channel_from(o);
    cfg.length = o.length;
    cfg.delay = o.delay;
    cfg.policy = o.policy == "halt" ? ListPolicy::PickFirst : policy_from(o.policy);
    cfg.timing = o.timing;
    reports = run_trials(code, cfg, o.trials, o.seed, o.threads);
    if (!o.reports.empty()) emit(out, o.reports, reports_to_json(reports, code.ring().p()));
  }
  const Summary sum = summarize(reports);
  emit(out, o.output, o.format == "csv" ? summary_to_csv(sum) : summary_to_json(sum));
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convolutional codes over Z_{p^r}: construction, analysis, erasure list decoding"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Random observable code");
  gen->add_option("--p", o.p, "Prime p")->required();
  gen->add_option("--r", o.r, "Exponent r")->required();
  gen->add_option("--n", o.n, "Code length n")->required();
  gen->add_option("--k", o.k_list, "Comma-separated block sizes k_0,...,k_{r-1}")->required();
  gen->add_option("--deg", o.deg, "Entry degree bound");
  gen->add_option("--seed", o.seed);
  gen->add_option("--attempts", o.attempts, "Sampling attempts before giving up");
  gen->add_option("-o,--output", o.output);

  auto* check = app.add_subcommand("check", "Print code properties");
  check->add_option("--code", o.code)->required();
  check->add_option("--distances", o.distances, "Print d_j^c for j below this bound");

  auto* encode_cmd = app.add_subcommand("encode", "Encode a random input");
  encode_cmd->add_option("--code", o.code)->required();
  encode_cmd->add_option("--seed", o.seed);
  encode_cmd->add_option("--length", o.length, "Number of time slices");
  encode_cmd->add_option("-o,--output", o.output);

  auto* channel = app.add_subcommand("channel", "Erase symbols of a stream");
  channel->add_option("--received", o.received, "Input stream")->required();
  channel->add_option("--model", o.model, "iid or ge");
  channel->add_option("--eps", o.eps, "iid erasure probability");
  channel->add_option("--ge-loss-good", o.ge_loss_good);
  channel->add_option("--ge-loss-bad", o.ge_loss_bad);
  channel->add_option("--ge-good-to-bad", o.ge_g2b);
  channel->add_option("--ge-bad-to-good", o.ge_b2g);
  channel->add_option("--seed", o.seed);
  channel->add_option("-o,--output", o.output, "Erased stream");
  channel->add_option("--pattern", o.pattern, "Where to write the erasure pattern");

  auto* decode = app.add_subcommand("decode", "List-decode one window, or the whole stream");
  decode->add_option("--code", o.code)->required();
  decode->add_option("--received", o.received)->required();
  decode->add_option("--pattern", o.pattern);
  decode->add_option("--at", o.at, "Window start; omit for sequential decoding");
  decode->add_option("-T,--delay", o.delay);
  decode->add_option("--limit", o.limit, "Most list entries to print");
  decode->add_option("--policy", o.policy, "halt, first or branch (sequential mode)");
  decode->add_option("-o,--output", o.output);

  auto* oracle = app.add_subcommand("oracle", "Brute-force list of one window");
  oracle->add_option("--code", o.code)->required();
  oracle->add_option("--received", o.received)->required();
  oracle->add_option("--pattern", o.pattern);
  oracle->add_option("--at", o.at);
  oracle->add_option("-T,--delay", o.delay);
  oracle->add_option("--limit", o.limit);
  oracle->add_option("-o,--output", o.output);

  auto* stats = app.add_subcommand("stats", "Summaries of trial batches and the cost probe");
  stats->add_option("--input", o.input, "Trial reports to summarize");
  stats->add_option("--code", o.code);
  stats->add_option("--trials", o.trials, "Run this many trials");
  stats->add_option("--reports", o.reports, "Where to write the raw trial reports");
  stats->add_option("--length", o.length);
  stats->add_option("-T,--delay", o.delay);
  stats->add_option("--model", o.model);
  stats->add_option("--eps", o.eps);
  stats->add_option("--ge-loss-good", o.ge_loss_good);
  stats->add_option("--ge-loss-bad", o.ge_loss_bad);
  stats->add_option("--ge-good-to-bad", o.ge_g2b);
  stats->add_option("--ge-bad-to-good", o.ge_b2g);
  stats->add_option("--seed", o.seed);
  stats->add_option("--policy", o.policy, "first (default) or branch");
  stats->add_option("--threads", o.threads);
  stats->add_flag("--timing", o.timing, "Record wall time per window");
  stats->add_flag("--probe", o.probe, "Run the operation-count scaling probe");
  stats->add_option("--format", o.format, "json or csv");
  stats->add_option("-o,--output", o.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*gen) run_gen(o, out);
    if (*check) run_check(o, out);
    if (*encode_cmd) run_encode(o, out);
    if (*channel) run_channel(o, out);
    if (*decode) run_decode(o, out);
    if (*oracle) run_oracle(o, out);
    if (*stats) run_stats(o, out, err);
  } catch (const DecodeInvalid&) {
    return 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ConstructionError& e) {
    err << "invalid code: " << e.what() << '\n';
    return 2;
  } catch (const GenerationFailed& e) {
    err << "generation failed: " << e.what() << '\n';
    return 1;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int cli_main(int argc, char** argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace convring
