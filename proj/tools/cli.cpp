#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>

#include "hq/bench.hpp"
#include "hq/bitstream.hpp"
#include "hq/twostage.hpp"
#include "vector_file.hpp"

namespace hq::cli {
namespace {

namespace fs = std::filesystem;

struct QuantizeArgs {
  std::string input, output;
  int bits = 0;
  std::optional<long> dim;
  std::string mode = "unbiased";
  std::uint64_t seed = 7;
  bool text = false;
};

struct DequantizeArgs {
  std::string input, output;
  bool text = false;
};

struct BenchArgs {
  std::string suite;
  std::optional<long> dim;
  std::optional<int> bits;
  std::optional<long> trials;
  std::uint64_t seed = 7;
  std::string mode = "unbiased";
  std::string csv;
  bool trend = false;
};

Mode parse_mode(const std::string& s) { return s == "biased" ? Mode::kBiased : Mode::kUnbiased; }

std::string payload_name(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.hq", n);
  return buf;
}

int cmd_quantize(const QuantizeArgs& a, std::ostream& out) {
  const VectorSet set = read_vector_file(a.input, a.text);
  if (a.dim && *a.dim != set.d_orig) {
    throw std::runtime_error("input dimension " + std::to_string(set.d_orig) + " != --dim " +
                             std::to_string(*a.dim));
  }
  const QuantConfig cfg = QuantConfig::make(set.d_orig, a.bits, parse_mode(a.mode));
  fs::create_directories(a.output);
  std::size_t total = 0;
  for (std::size_t n = 0; n < set.vectors.size(); ++n) {
    const TwoStageCode code = quantize_scaled(set.vectors[n], cfg, a.seed, n);
    const std::vector<std::uint8_t> bytes = encode(code);
    std::ofstream f(fs::path(a.output) / payload_name(n), std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed in " + a.output);
    total += bytes.size();
  }
  out << "quantized " << set.vectors.size() << " vectors (d=" << set.d_orig << ", b=" << a.bits
      << ") into " << a.output << ", " << total << " bytes\n";
  return kExitOk;
}

int cmd_dequantize(const DequantizeArgs& a, std::ostream& out) {
  std::vector<fs::path> files;
  if (fs::is_directory(a.input)) {
    for (const auto& e : fs::directory_iterator(a.input)) {
      if (e.path().extension() == ".hq") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.emplace_back(a.input);
  }
  if (files.empty()) throw std::runtime_error("no .hq payloads in " + a.input);
  VectorSet set;
  for (const auto& p : files) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(f),
                                          std::istreambuf_iterator<char>()};
    const TwoStageCode code = decode(bytes);
    if (!set.vectors.empty() && code.cfg.d_orig != set.d_orig) {
      throw std::runtime_error(p.string() + ": dimension differs from earlier payloads");
    }
    set.d_orig = code.cfg.d_orig;
    set.vectors.push_back(dequantize_two_stage(code));
  }
  write_vector_file(a.output, set, a.text);
  out << "dequantized " << set.vectors.size() << " vectors into " << a.output << '\n';
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  using namespace hq::bench;
  Params p;
  p.seed = a.seed;
  p.mode = parse_mode(a.mode);
  auto fill = [&](long dim, int bits, long trials) {
    p.dim = a.dim.value_or(dim);
    p.bits = a.bits.value_or(bits);
    p.trials = a.trials.value_or(trials);
  };
  std::vector<ExperimentRow> rows;
  if (a.suite == "mse") {
    fill(1024, 6, 20000);
    rows = run_mse(p);
    if (a.trend) {
      auto trend = run_mse_trend(p.dim, 3, 8, a.trials.value_or(5000), p.seed, p.mode);
      rows.insert(rows.end(), trend.begin(), trend.end());
    }
  } else if (a.suite == "unbiased") {
    fill(64, 3, 100000);
    rows = run_unbiased(p);
  } else if (a.suite == "inner-product") {
    fill(512, 4, 10000);
    rows = run_inner_product(p);
  } else if (a.suite == "rate") {
    fill(4096, 4, 1000);
    rows = run_rate(p);
  } else {
    rows = run_oracle(p.seed);
  }

  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    out << std::left << std::setw(36) << r.experiment << " d=" << r.d << " b=" << r.bits
        << " trials=" << r.trials << " measured=" << std::setprecision(6) << r.measured
        << " paper=" << r.paper_constant << " accept " << r.acceptance << "  "
        << (r.pass ? "PASS" : "FAIL") << "  (" << std::setprecision(3) << r.wall_seconds
        << " s)\n";
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw std::runtime_error("cannot write " + a.csv);
    write_csv(f, rows);
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hq: dithered Hadamard vector quantization"};
  app.require_subcommand(1);
  const std::map<std::string, std::string> modes{{"biased", "biased"}, {"unbiased", "unbiased"}};

  QuantizeArgs qa;
  auto* quantize = app.add_subcommand("quantize", "Encode a vector file into .hq payloads");
  quantize->add_option("--input", qa.input, "Vector file")->required();
  quantize->add_option("--output", qa.output, "Output directory for .hq payloads")->required();
  quantize->add_option("--bits", qa.bits, "Bits per coordinate")->required()->check(CLI::Range(1, 16));
  quantize->add_option("--dim", qa.dim, "Expected input dimension");
  quantize->add_option("--mode", qa.mode)->transform(CLI::IsMember(modes));
  quantize->add_option("--seed", qa.seed);
  quantize->add_flag("--text", qa.text, "Plain-text vectors, one per line");

  DequantizeArgs da;
  auto* dequantize = app.add_subcommand("dequantize", "Decode .hq payloads into a vector file");
  dequantize->add_option("--input", da.input, "A .hq file or a directory of them")->required();
  dequantize->add_option("--output", da.output, "Vector file")->required();
  dequantize->add_flag("--text", da.text, "Plain-text vectors, one per line");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a measurement suite");
  bench->add_option("suite", ba.suite, "mse | unbiased | inner-product | rate | oracle")
      ->required()
      ->check(CLI::IsMember({"mse", "unbiased", "inner-product", "rate", "oracle"}));
  bench->add_option("--dim", ba.dim)->check(CLI::PositiveNumber);
  bench->add_option("--bits", ba.bits)->check(CLI::Range(1, 16));
  bench->add_option("--trials", ba.trials)->check(CLI::Range(2L, 100000000L));
  bench->add_option("--seed", ba.seed);
  bench->add_option("--mode", ba.mode)->transform(CLI::IsMember(modes));
  bench->add_option("--csv", ba.csv, "Write rows as CSV");
  bench->add_flag("--trend", ba.trend, "mse: also sweep b = 3..8");

  std::vector<std::string> storage{"hq"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*quantize) return cmd_quantize(qa, out);
    if (*dequantize) return cmd_dequantize(da, out);
    return cmd_bench(ba, out);
  } catch (const std::exception& e) {
    err << "hq: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace hq::cli
