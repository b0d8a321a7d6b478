// mdsaccel: encode/decode shards, simulate and analyse access latency, and run
// the loopback node servers and client.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <zlib.h>

#include <CLI11.hpp>

#include "mdsaccel/mdsaccel.hpp"

namespace fs = std::filesystem;
using namespace mdsaccel;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string crc32_hex(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", crc);
  return buf;
}

std::string shard_name(std::size_t node) { return "node" + std::to_string(node) + ".shard"; }

void print_json(const Json& j) { std::cout << j.dump(2) << '\n' << std::flush; }

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw FormatError("cannot write " + path.string());
}

NodeLatency require_iid(const LatencyModel& model, const std::string& spec) {
  return std::visit(Overloaded{[](const Uniform& m) -> NodeLatency { return m; },
                               [](const ShiftedExp& m) -> NodeLatency { return m; },
                               [](const Constant& m) -> NodeLatency { return m; },
                               [&](const auto&) -> NodeLatency {
                                 throw UsageError("model '" + spec + "' is not i.i.d.; use uniform, sexp or const");
                               }},
                    model);
}

LatencyModel parse_model_flag(const std::string& spec) {
  try {
    return parse_model_spec(spec);
  } catch (const ModelSpecError& e) {
    throw UsageError(e.what());
  }
}

struct Manifest {
  CodeParams params;
  std::uint64_t original_len;
  std::string original_crc32;
  std::vector<std::string> files;
  std::vector<std::string> symbol_crc32;

  static Manifest load(const fs::path& path) {
    const Json j = read_json(path);
    try {
      Manifest m{CodeParams(j.at("n"), j.at("k"), j.at("m")), j.at("original_len"), j.at("original_crc32"), {}, {}};
      for (const auto& c : j.at("checksums")) {
        m.files.push_back(c.at("file"));
        m.symbol_crc32.push_back(c.at("crc32"));
      }
      if (m.files.size() != m.params.n()) throw FormatError("manifest lists the wrong number of shards");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
};

// ---- encode ----------------------------------------------------------------

struct EncodeOpts {
  std::string input, out_dir;
  std::size_t n = 0, k = 0, m = 0;
  bool pad = false;
};

int run_encode(const EncodeOpts& o) {
  const CodeParams params(o.n, o.k, o.m);
  auto bytes = read_file_bytes(o.input);
  const std::size_t need = params.k() * params.m();
  const std::size_t original_len = bytes.size();
  if (bytes.size() != need) {
    if (!o.pad || bytes.size() > need)
      throw UsageError("input has " + std::to_string(bytes.size()) + " bytes but k*m = " + std::to_string(need) +
                       (bytes.size() < need ? "; pass --pad to zero-fill" : ""));
    bytes.resize(need, 0x00);
  }
  std::vector<Column> data(params.k());
  for (std::size_t i = 0; i < params.k(); ++i)
    data[i].assign(bytes.begin() + static_cast<std::ptrdiff_t>(i * params.m()),
                   bytes.begin() + static_cast<std::ptrdiff_t>((i + 1) * params.m()));
  const CodeArray code = encode(params, data);

  fs::create_directories(o.out_dir);
  Json manifest;
  manifest["n"] = params.n();
  manifest["k"] = params.k();
  manifest["m"] = params.m();
  manifest["original_len"] = original_len;
  manifest["original_crc32"] = crc32_hex(std::span(bytes).first(original_len));
  manifest["checksums"] = Json::array();
  for (std::size_t id = 1; id <= params.n(); ++id) {
    save_shard(fs::path(o.out_dir) / shard_name(id), Shard{params, id, code.node(id)});
    manifest["checksums"].push_back({{"node", id}, {"file", shard_name(id)}, {"crc32", crc32_hex(code.node(id))}});
  }
  write_text(fs::path(o.out_dir) / "manifest.json", manifest.dump(2) + "\n");
  print_json(manifest);
  return 0;
}

// ---- decode ----------------------------------------------------------------

struct DecodeOpts {
  std::string dir, output;
  std::vector<std::size_t> nodes;
};

int run_decode(const DecodeOpts& o) {
  const fs::path dir(o.dir);
  const Manifest man = Manifest::load(dir / "manifest.json");
  const CodeParams& p = man.params;
  const bool explicit_nodes = !o.nodes.empty();
  std::vector<std::size_t> candidates = o.nodes;
  if (!explicit_nodes)
    for (std::size_t id = 1; id <= p.n(); ++id) candidates.push_back(id);
  for (std::size_t id : candidates)
    if (id < 1 || id > p.n())
      throw UsageError("node " + std::to_string(id) + " outside [1, " + std::to_string(p.n()) + "]");

  NodeColumns read;
  std::vector<std::string> skipped;
  for (std::size_t id : candidates) {
    if (read.ids.size() == p.k()) break;
    try {
      const Shard s = load_shard(dir / man.files[id - 1]);
      if (!(s.params == p) || s.node_id != id) throw FormatError("header disagrees with manifest");
      if (crc32_hex(s.symbols) != man.symbol_crc32[id - 1]) throw FormatError("checksum mismatch");
      read.ids.push_back(id);
      read.columns.push_back(s.symbols);
    } catch (const FormatError& e) {
      if (explicit_nodes) throw;
      skipped.push_back(man.files[id - 1] + ": " + e.what());
    }
  }
  if (read.ids.size() < p.k())
    throw SubsetError("only " + std::to_string(read.ids.size()) + " usable shards, need " + std::to_string(p.k()));

  const auto data = decode_from(p, read);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(p.k() * p.m());
  for (const auto& col : data) bytes.insert(bytes.end(), col.begin(), col.end());
  bytes.resize(man.original_len);
  if (crc32_hex(bytes) != man.original_crc32) throw FormatError("decoded bytes fail the manifest checksum");
  write_file_bytes(o.output, bytes);

  Json out;
  out["nodes_used"] = read.ids;
  out["bytes"] = bytes.size();
  out["verified"] = true;
  out["skipped"] = skipped;
  print_json(out);
  return 0;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOpts {
  std::size_t n = 0, k = 0;
  std::string model, target = "uniform", out_dir;
  std::uint64_t trials = 10000, seed = 1;
  unsigned threads = 0;
};

TargetPolicy parse_target(const std::string& text) {
  if (text == "uniform") return UniformOverDataNodes{};
  try {
    std::size_t used = 0;
    const unsigned long t = std::stoul(text, &used);
    if (used == text.size()) return FixedTarget{t};
  } catch (const std::exception&) {
  }
  throw UsageError("--target must be 'uniform' or a data node id, got '" + text + "'");
}

int run_simulate(const SimulateOpts& o) {
  SimConfig config{CodeParams(o.n, o.k, 1), parse_model_flag(o.model)};
  config.trials = o.trials;
  config.seed = o.seed;
  config.target = parse_target(o.target);
  config.threads = o.threads;
  validate(config);

  const bool keep = !o.out_dir.empty();
  const SimRun run = monte_carlo(config, keep);
  std::string log_path;
  if (keep) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    std::ofstream jsonl(dir / "trials.jsonl", std::ios::binary);
    write_trial_log(jsonl, run.records);
    std::ofstream csv(dir / "trials.csv", std::ios::binary);
    write_trial_csv(csv, run.records);
    if (!jsonl || !csv) throw FormatError("cannot write trial logs under " + dir.string());
    log_path = (dir / "trials.jsonl").string();
  }
  const Json summary = to_json(config, run.summary, log_path);
  if (keep) write_text(fs::path(o.out_dir) / "summary.json", summary.dump(2) + "\n");
  print_json(summary);
  return 0;
}

// ---- analytic / worst-case -------------------------------------------------

struct AnalyticOpts {
  std::size_t n = 0, k = 0;
  std::string model;
};

int run_analytic(const AnalyticOpts& o) {
  const CodeParams params(o.n, o.k, 1);
  const NodeLatency model = require_iid(parse_model_flag(o.model), o.model);
  print_json(to_json(analytics::analyze(params, model)));
  return 0;
}

struct WorstCaseOpts {
  std::string family;
  double T = 100;
  std::vector<double> lambdas = {0.02}, shifts = {0}, v_ts = {100};
};

int run_worst_case(const WorstCaseOpts& o) {
  if (o.family == "uniform") {
    Json j = to_json(analytics::worst_case_uniform(o.T));
    j["family"] = "uniform";
    print_json(j);
    return 0;
  }
  for (double v : o.v_ts)
    if (!(v > 0)) throw UsageError("--vt values must be positive");
  Json j;
  j["family"] = "sexp";
  j["sweep"] = Json::array();
  for (const auto& pt : analytics::worst_case_shifted_exp_sweep(o.lambdas, o.shifts, o.v_ts)) {
    Json row;
    row["lambda"] = pt.lambda;
    row["s"] = pt.s;
    row["v_t"] = pt.v_t;
    const Json summary = to_json(pt.summary);
    for (const auto& [key, value] : summary.items()) row[key] = value;
    j["sweep"].push_back(row);
  }
  print_json(j);
  return 0;
}

// ---- serve-node / fetch ----------------------------------------------------

struct ServeOpts {
  std::size_t node = 0;
  std::string shard, listen = "127.0.0.1:0", delay_model, log;
  double delay_ms = 0;
  std::uint64_t seed = 1;
};

int run_serve(const ServeOpts& o) {
  net::NodeServerConfig cfg;
  cfg.node_id = o.node;
  cfg.listen = net::parse_endpoint(o.listen, true);
  cfg.shard_path = o.shard;
  if (!o.delay_model.empty())
    cfg.delay = net::ModelDelay{require_iid(parse_model_flag(o.delay_model), o.delay_model), o.seed};
  else if (o.delay_ms < 0)
    throw UsageError("--delay-ms must be non-negative");
  else
    cfg.delay = net::FixedDelay{std::chrono::microseconds(static_cast<std::int64_t>(o.delay_ms * 1000))};
  if (!o.log.empty()) cfg.log_path = o.log;

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  auto server = net::serve_node(cfg);
  Json ready;
  ready["node"] = o.node;
  ready["listen"] = server->endpoint().to_string();
  std::cout << ready.dump() << '\n' << std::flush;
  int sig = 0;
  sigwait(&stop_signals, &sig);
  server->stop();
  return 0;
}

struct FetchOpts {
  std::vector<std::string> endpoints;
  std::size_t t = 0, n = 0, k = 0, m = 0;
  std::string strategy = "aaul", manifest, output;
  long timeout_ms = 10000;
};

int run_fetch(const FetchOpts& o) {
  std::vector<net::Endpoint> endpoints;
  for (const auto& e : o.endpoints) endpoints.push_back(net::parse_endpoint(e));
  std::optional<Manifest> man;
  if (!o.manifest.empty()) man = Manifest::load(o.manifest);
  net::FetchOptions opts;
  opts.timeout = std::chrono::milliseconds(o.timeout_ms);

  net::FetchResult result;
  if (o.strategy == "da") {
    result = net::fetch_da(endpoints, o.t, opts);
  } else {
    if (!man && (o.n == 0 || o.k == 0 || o.m == 0)) throw UsageError("aaul needs --manifest or all of -n, -k, -m");
    const CodeParams params = man ? man->params : CodeParams(o.n, o.k, o.m);
    result = net::fetch_aaul(endpoints, params, o.t, opts);
  }

  Json out;
  out["strategy"] = o.strategy;
  out["t"] = o.t;
  out["path"] = std::string(to_string(result.path));
  out["nodes_used"] = result.nodes_used;
  out["wall_ms"] = result.wall_ms();
  out["bytes"] = result.data.size();
  out["crc32"] = crc32_hex(result.data);
  if (man) {
    if (o.t < 1 || o.t > man->params.n()) throw UsageError("target outside the manifest's nodes");
    out["verified"] = crc32_hex(result.data) == man->symbol_crc32[o.t - 1];
  } else {
    out["verified"] = nullptr;
  }
  if (!o.output.empty()) write_file_bytes(o.output, result.data);
  print_json(out);
  if (man && !out["verified"].get<bool>()) {
    std::cerr << "mdsaccel: fetched bytes do not match the manifest checksum\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDS-coded storage: shard encoding, access-latency analysis and a loopback node harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mdsaccel 0.1.0");

  EncodeOpts enc;
  auto* c_enc = app.add_subcommand("encode", "split a file into k data columns and write n shard files");
  c_enc->add_option("-i,--input", enc.input, "input file")->required()->check(CLI::ExistingFile);
  c_enc->add_option("-n", enc.n, "total nodes")->required();
  c_enc->add_option("-k", enc.k, "data nodes")->required();
  c_enc->add_option("-m", enc.m, "symbols (bytes) per node")->required();
  c_enc->add_option("-o,--out-dir", enc.out_dir, "directory for shards and manifest.json")->required();
  c_enc->add_flag("--pad", enc.pad, "zero-fill inputs shorter than k*m");

  DecodeOpts dec;
  auto* c_dec = app.add_subcommand("decode", "rebuild the original file from any k shards");
  c_dec->add_option("-d,--dir", dec.dir, "directory holding manifest.json and shards")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_dec->add_option("-o,--output", dec.output, "output file")->required();
  c_dec->add_option("--nodes", dec.nodes, "node ids to read (default: first k usable)")->delimiter(',');

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo comparison of direct and accelerated access");
  c_sim->add_option("-n", sim.n, "total nodes")->required();
  c_sim->add_option("-k", sim.k, "data nodes")->required();
  c_sim->add_option("--model", sim.model, "latency model, e.g. uniform:T=100 or sexp:lambda=0.02,s=1")->required();
  c_sim->add_option("--trials", sim.trials, "number of trials")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "base seed")->envname("MDSF_SEED")->capture_default_str();
  c_sim->add_option("--target", sim.target, "'uniform' or a fixed data node id")->capture_default_str();
  c_sim->add_option("--threads", sim.threads, "worker threads (0 = all cores)")->capture_default_str();
  c_sim->add_option("--out", sim.out_dir, "write trials.jsonl, trials.csv and summary.json here");

  AnalyticOpts ana;
  auto* c_ana = app.add_subcommand("analytic", "closed-form and numeric expected latencies");
  c_ana->add_option("-n", ana.n, "total nodes")->required();
  c_ana->add_option("-k", ana.k, "data nodes")->required();
  c_ana->add_option("--model", ana.model, "i.i.d. latency model")->required();

  WorstCaseOpts wc;
  auto* c_wc = app.add_subcommand("worst-case", "(3,2) code with the target pinned at its worst latency");
  c_wc->add_option("--family", wc.family, "uniform or sexp")->required()->check(CLI::IsMember({"uniform", "sexp"}));
  c_wc->add_option("--T", wc.T, "uniform range upper bound")->capture_default_str()->check(CLI::PositiveNumber);
  c_wc->add_option("--lambda", wc.lambdas, "sexp rates (comma separated)")->delimiter(',')->check(CLI::PositiveNumber);
  c_wc->add_option("--s", wc.shifts, "sexp shifts (comma separated)")->delimiter(',')->check(CLI::NonNegativeNumber);
  c_wc->add_option("--vt", wc.v_ts, "target latencies (comma separated)")->delimiter(',');

  ServeOpts srv;
  auto* c_srv = app.add_subcommand("serve-node", "serve one shard until SIGINT/SIGTERM");
  c_srv->add_option("--node", srv.node, "node id held by the shard")->required();
  c_srv->add_option("--shard", srv.shard, "shard file")->required()->check(CLI::ExistingFile);
  c_srv->add_option("--listen", srv.listen, "host:port (port 0 picks a free port)")->capture_default_str();
  auto* fixed = c_srv->add_option("--delay-ms", srv.delay_ms, "fixed delay before each reply");
  auto* model = c_srv->add_option("--delay-model", srv.delay_model, "per-request delay model, 1 unit = 1 ms");
  fixed->excludes(model);
  c_srv->add_option("--seed", srv.seed, "seed for --delay-model")->envname("MDSF_SEED");
  c_srv->add_option("--log", srv.log, "append request log (JSON lines)");

  FetchOpts fet;
  auto* c_fet = app.add_subcommand("fetch", "read node t's column from running node servers");
  c_fet->add_option("--endpoints", fet.endpoints, "host:port per node, in node order")->required()->delimiter(',');
  c_fet->add_option("-t", fet.t, "target data node")->required();
  c_fet->add_option("--strategy", fet.strategy, "da or aaul")->capture_default_str()->check(CLI::IsMember({"da", "aaul"}));
  c_fet->add_option("--manifest", fet.manifest, "manifest.json for code parameters and verification")
      ->check(CLI::ExistingFile);
  c_fet->add_option("-n", fet.n, "total nodes (without --manifest)");
  c_fet->add_option("-k", fet.k, "data nodes (without --manifest)");
  c_fet->add_option("-m", fet.m, "symbols per node (without --manifest)");
  c_fet->add_option("--timeout-ms", fet.timeout_ms, "overall deadline")->capture_default_str()->check(CLI::PositiveNumber);
  c_fet->add_option("-o,--output", fet.output, "write the fetched bytes here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (c_enc->parsed()) return run_encode(enc);
    if (c_dec->parsed()) return run_decode(dec);
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_ana->parsed()) return run_analytic(ana);
    if (c_wc->parsed()) return run_worst_case(wc);
    if (c_srv->parsed()) return run_serve(srv);
    if (c_fet->parsed()) return run_fetch(fet);
  } catch (const UsageError& e) {
    std::cerr << "mdsaccel: " << e.what() << '\n';
    return 1;
  } catch (const InvalidParams& e) {
    std::cerr << "mdsaccel: " << e.what() << '\n';
    return 1;
  } catch (const RequestError& e) {
    std::cerr << "mdsaccel: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mdsaccel: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
