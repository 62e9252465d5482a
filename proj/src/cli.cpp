#include "orthoseries/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthoseries/coefficients.hpp"
#include "orthoseries/io.hpp"
#include "orthoseries/majorants.hpp"
#include "orthoseries/systems.hpp"
#include "orthoseries/verify.hpp"

namespace orthoseries::cli {

using nlohmann::json;

namespace {

/// Bad input detected after CLI11 accepted the flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> split_numbers(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

struct SequenceFlags {
  std::string powerlog;
  std::string explicit_file;
  bool zero_tail = false;
  std::uint64_t truncation = 65536;

  void attach(CLI::App* app) {
    app->add_option("--powerlog", powerlog, "a_n = C n^-alpha log2(n+1)^-beta, given as C,alpha,beta");
    app->add_option("--explicit", explicit_file, "coefficient file: one value per line (re or re,im)");
    app->add_flag("--zero-tail", zero_tail, "the explicit list is followed by zeros");
    app->add_option("--trunc", truncation, "truncation index (<= 2^32)")->capture_default_str();
  }

  SequenceSpec build() const {
    if (powerlog.empty() == explicit_file.empty()) {
      throw UsageError("give exactly one of --powerlog and --explicit");
    }
    if (truncation < 1 || truncation > kMaxTruncation) throw UsageError("--trunc must lie in [1, 2^32]");
    if (!powerlog.empty()) {
      const auto v = split_numbers(powerlog, "--powerlog");
      if (v.size() != 3) throw UsageError("--powerlog takes C,alpha,beta");
      return SequenceSpec::power_log(v[0], v[1], v[2]);
    }
    return SequenceSpec::explicit_values(read_coefficients_file(explicit_file), zero_tail);
  }
};

struct WeightFlags {
  std::string logpower;
  std::string explicit_file;

  void attach(CLI::App* app) {
    app->add_option("--logpower", logpower, "omega_n = max(1, log2(n+shift))^gamma, given as gamma[,shift]");
    app->add_option("--weights", explicit_file, "weight file: one positive nondecreasing value per line");
  }

  WeightSpec build() const {
    if (!logpower.empty() && !explicit_file.empty()) throw UsageError("give at most one of --logpower and --weights");
    if (!explicit_file.empty()) {
      std::vector<double> values;
      for (const auto& z : read_coefficients_file(explicit_file)) values.push_back(z.real());
      return WeightSpec::explicit_values(std::move(values));
    }
    if (logpower.empty()) throw UsageError("a weight is required (--logpower or --weights)");
    const auto v = split_numbers(logpower, "--logpower");
    if (v.empty() || v.size() > 2) throw UsageError("--logpower takes gamma[,shift]");
    return WeightSpec::log_power(v[0], v.size() == 2 ? v[1] : 0.0);
  }
};

/// Writes to --out when given, else to `fallback`.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw UsageError("failed writing '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename T>
std::vector<T> coefficients_for(const std::vector<Complex>& values) {
  std::vector<T> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if constexpr (is_complex_v<T>) {
      out.push_back(values[i]);
    } else {
      if (values[i].imag() != 0.0) {
        throw ParseError("complex coefficient for a real system", i + 1, 1);
      }
      out.push_back(values[i].real());
    }
  }
  return out;
}

template <typename T>
json majorant_report(const SystemModel<T>& model, const std::vector<Complex>& raw, std::size_t n) {
  const auto a = coefficients_for<T>(raw);
  if (n == 0) n = std::min(a.size(), model.system.size());
  const auto profile = majorant<T>(model.system, a, n, model.space);
  const auto validation = validate_ons(model.system, model.space, 1e-10);
  json j = to_json(profile);
  j["n"] = n;
  j["validate_ons"] = validation.orthonormal;
  j["riesz_lower"] = validation.report.riesz_lower;
  j["riesz_upper"] = validation.report.riesz_upper;
  return j;
}

template <typename T>
std::string majorant_csv(const SystemModel<T>& model, const json& report) {
  std::ostringstream os;
  os << "atom,weight,value,argmax_prefix\n";
  const auto& values = report.at("values");
  const auto& argmax = report.at("argmax_prefix");
  for (std::size_t i = 0; i < model.space.atoms(); ++i) {
    os << i << ',' << format_double(model.space.weight(i)) << ',' << format_double(values[i].get<double>())
       << ',' << argmax[i].get<std::size_t>() << '\n';
  }
  return os.str();
}

}  // namespace

int dispatch(int argc, const char* const* argv) { return dispatch(argc, argv, std::cout, std::cerr); }

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal series in direct integrals: generators, condition checks, majorants, verification"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // gen-ons
  auto* gen = app.add_subcommand("gen-ons", "Generate an orthonormal system");
  std::string gen_config;
  std::string gen_kind = "StandardBasis";
  std::size_t gen_n = 1;
  std::size_t gen_resolution = 0;
  std::size_t gen_dim = 1;
  std::string gen_field = "real";
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_path;
  gen->add_option("--config", gen_config, "SystemSpec JSON file (overrides the spec flags)");
  gen->add_option("--kind", gen_kind, "RandomQR|Rademacher|Haar|StandardBasis|TensorVector|VaryingDim")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "number of functions")->capture_default_str();
  gen->add_option("--resolution", gen_resolution, "grid size or atom count (0 = smallest)")->capture_default_str();
  gen->add_option("--fiber-dim", gen_dim, "fiber dimension")->capture_default_str();
  gen->add_option("--field", gen_field, "real|complex")->capture_default_str();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  gen->add_option("--out", out_path, "output path (default stdout)");

  // condition checks
  auto* mr = app.add_subcommand("check-mr", "Weyl-type sum L = sum |a_n|^2 log2^2(n+1)");
  SequenceFlags mr_seq;
  mr_seq.attach(mr);
  bool full = false;
  mr->add_flag("--full", full, "emit every partial sum instead of checkpoints");
  mr->add_option("--out", out_path, "output path (default stdout)");

  auto* tandori = app.add_subcommand("check-tandori", "Block condition sum_k (sum_{M_k} |a_n|^2 log2^2 n)^(1/2)");
  SequenceFlags tandori_seq;
  tandori_seq.attach(tandori);
  tandori->add_flag("--full", full, "emit every partial sum instead of checkpoints");
  tandori->add_option("--out", out_path, "output path (default stdout)");

  auto* orlicz = app.add_subcommand("check-orlicz", "Weighted conditions and the reduction chain to the block condition");
  SequenceFlags orlicz_seq;
  orlicz_seq.attach(orlicz);
  WeightFlags orlicz_weight;
  orlicz_weight.attach(orlicz);
  orlicz->add_flag("--full", full, "emit every partial sum instead of checkpoints");
  orlicz->add_option("--out", out_path, "output path (default stdout)");

  // majorant
  auto* maj = app.add_subcommand("majorant", "Pointwise majorant of the partial sums of a series");
  std::string system_path;
  std::string coeff_path;
  std::size_t maj_n = 0;
  maj->add_option("--system", system_path, "system file (.csv or JSON)")->required();
  maj->add_option("--coefficients", coeff_path, "coefficient file: one value per line (re or re,im)")->required();
  maj->add_option("--n", maj_n, "number of terms (0 = all available)");
  maj->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  maj->add_option("--out", out_path, "output path (default stdout)");

  // decompose
  auto* dec = app.add_subcommand("decompose", "Dyadic blocks of (0, j] against 2^r");
  std::uint64_t dec_j = 0;
  unsigned dec_r = 0;
  dec->add_option("j", dec_j, "prefix length, 1 <= j <= 2^r")->required();
  dec->add_option("r", dec_r, "dyadic depth")->required();
  dec->add_flag("--json", full, "print the decomposition as JSON");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the randomized verification suite");
  std::string ver_config;
  std::string ver_checks;
  std::optional<std::uint64_t> ver_seed;
  unsigned threads = 0;
  ver->add_option("--config", ver_config, "TrialConfig JSON file")->required();
  ver->add_option("--check", ver_checks, "comma-separated subset of checks to run");
  ver->add_option("--seed", ver_seed, "override the config seed");
  ver->add_option("--threads", threads, "worker threads (0 = available cores)")->capture_default_str();
  ver->add_option("--out", out_path, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      SystemSpec spec;
      if (!gen_config.empty()) {
        spec = parse_json_text(read_text_file(gen_config)).get<SystemSpec>();
      } else {
        spec.kind = system_kind_from_string(gen_kind);
        spec.n_functions = gen_n;
        spec.resolution = gen_resolution;
        spec.fiber_dim = gen_dim;
        spec.field = field_from_string(gen_field);
        spec.seed = seed;
      }
      std::string text;
      std::visit(
          [&](const auto& model) {
            if (format == "csv") {
              std::ostringstream os;
              write_system_csv(os, model);
              text = os.str();
            } else {
              text = dump(system_to_json(model));
            }
          },
          generate_any(spec));
      emit(out_path, text, out);
      return kExitOk;
    }
    if (mr->parsed()) {
      const auto a = mr_seq.build();
      emit(out_path, dump(to_json(weyl_L(a, mr_seq.truncation), full)), out);
      return kExitOk;
    }
    if (tandori->parsed()) {
      const auto a = tandori_seq.build();
      if (tandori_seq.truncation < 3) throw UsageError("--trunc must be at least 3 for the block condition");
      emit(out_path, dump(to_json(tandori_sum(a, tandori_seq.truncation), full)), out);
      return kExitOk;
    }
    if (orlicz->parsed()) {
      const auto a = orlicz_seq.build();
      const auto w = orlicz_weight.build();
      if (orlicz_seq.truncation < 3) throw UsageError("--trunc must be at least 3 for the reduction chain");
      const auto reduction = orlicz_reduction(a, w, orlicz_seq.truncation);
      emit(out_path, dump(to_json(reduction, full)), out);
      return reduction.all_hold ? kExitOk : kExitCheckFailed;
    }
    if (maj->parsed()) {
      const AnyModel any = read_system_file(system_path);
      const auto raw = read_coefficients_file(coeff_path);
      std::string text;
      std::visit(
          [&](const auto& model) {
            const json report = majorant_report(model, raw, maj_n);
            text = format == "csv" ? majorant_csv(model, report) : dump(report);
          },
          any);
      emit(out_path, text, out);
      return kExitOk;
    }
    if (dec->parsed()) {
      const auto d = dyadic_decomposition(dec_j, dec_r);
      out << (full ? dump(to_json(d)) : format_blocks(d) + "\n");
      return kExitOk;
    }
    if (ver->parsed()) {
      TrialConfig cfg = config_from_json(parse_json_text(read_text_file(ver_config)));
      if (ver_seed) cfg.seed = *ver_seed;
      if (!ver_checks.empty()) {
        cfg.checks.clear();
        std::stringstream ss(ver_checks);
        std::string name;
        while (std::getline(ss, name, ',')) {
          if (!name.empty()) cfg.checks.insert(check_id_from_string(name));
        }
      }
      const auto report = run_suite(cfg, threads);
      emit(out_path, dump(to_json(report)), out);
      if (!out_path.empty() && out_path != "-") {
        err << (report.passed() ? "all checks passed" : "some checks FAILED") << '\n';
      }
      return report.passed() ? kExitOk : kExitCheckFailed;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace orthoseries::cli
