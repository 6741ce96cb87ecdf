#include "schurlab/io.hpp"
#include "schurlab/selftest.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace schurlab;
using io::json;

constexpr int kExitPass = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitBadGrid = 4;
constexpr int kExitBadFile = 5;

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lin:a:b:k or log:a:b:k, k points inclusive of both ends
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log")) {
    throw GridError("grid spec must be lin:a:b:k or log:a:b:k");
  }
  double a = 0.0, b = 0.0;
  long k = 0;
  try {
    std::size_t pos = 0;
    a = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument(parts[1]);
    b = std::stod(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument(parts[2]);
    k = std::stol(parts[3], &pos);
    if (pos != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const std::exception&) {
    throw GridError("grid spec has non-numeric fields: " + spec);
  }
  if (k < 1) throw GridError("grid needs at least one point");
  if (parts[0] == "log" && (a <= 0.0 || b <= 0.0)) {
    throw GridError("log grid endpoints must be positive");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(k));
  if (k == 1) {
    grid.push_back(a);
    return grid;
  }
  for (long i = 0; i < k; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(k - 1);
    grid.push_back(parts[0] == "lin" ? a + f * (b - a) : a * std::pow(b / a, f));
  }
  return grid;
}

SchattenIndex parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") {
    return SchattenIndex::infinity();
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return SchattenIndex(v);
  } catch (const std::exception&) {
    throw InputError("p must be a number >= 1 or \"inf\": " + s);
  }
}

struct Command {
  std::string verb;
  std::string input;
  std::string symbol_path;
  std::string output;
  std::string manifest_path;
  std::string what = "all";
  std::string p_spec = "inf";
  std::string grid_spec;
  double t = 1.0;
  int n = 1;
  long d = 1;
  std::uint64_t seed = 0;
  std::optional<double> tol_flag;
  std::optional<double> eig_flag;
  std::optional<int> max_iter_flag;
};

ToleranceConfig resolve_tolerances(const Command& cmd, double max_abs_entry) {
  ToleranceConfig tol = ToleranceConfig::defaults_for(max_abs_entry);
  if (const char* env = std::getenv("SCHURLAB_TOL"); env && !cmd.tol_flag) {
    try {
      tol.residual_tol = std::stod(env);
    } catch (const std::exception&) {
      throw InputError("SCHURLAB_TOL must be a number");
    }
  }
  if (cmd.tol_flag) tol.residual_tol = *cmd.tol_flag;
  if (cmd.eig_flag) tol.eig_tol = *cmd.eig_flag;
  if (cmd.max_iter_flag) tol.max_iter = *cmd.max_iter_flag;
  tol.validate();
  return tol;
}

void emit(const Command& cmd, const std::string& text) {
  if (cmd.output.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
  } else {
    io::write_text_file(cmd.output, text);
  }
}

void emit_json(const Command& cmd, const json& doc) { emit(cmd, doc.dump(2)); }

int run_classify_kernel(const Command& cmd, io::RunManifest& man) {
  const Kernel k = io::kernel_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, k.max_abs());
  auto note = [&man](const ClassificationResult& r) {
    (r.yes ? man.pass_count : man.fail_count)++;
  };
  if (cmd.what == "hermitian" || cmd.what == "pd" || cmd.what == "cnd") {
    ClassificationResult r;
    if (cmd.what == "hermitian") {
      r = is_hermitian(k, tol);
    } else if (cmd.what == "pd") {
      r = classify_pd(k, tol);
    } else {
      r = classify_cnd(k, tol);
    }
    note(r);
    emit_json(cmd, io::classification_to_json(r));
    return r.yes ? kExitPass : kExitMathFail;
  }
  if (cmd.what != "all") throw InputError("--what must be hermitian, pd, cnd or all");
  json out;
  const ClassificationResult herm = is_hermitian(k, tol);
  note(herm);
  out["hermitian"] = io::classification_to_json(herm);
  if (herm.yes) {
    const ClassificationResult pd = classify_pd(k, tol);
    note(pd);
    out["pd"] = io::classification_to_json(pd);
  } else {
    out["pd"] = json{{"verdict", "no"}, {"reason", "kernel is not hermitian"}};
    ++man.fail_count;
  }
  const ClassificationResult cnd = classify_cnd(k, tol);
  note(cnd);
  out["cnd"] = io::classification_to_json(cnd);
  emit_json(cmd, out);
  return kExitPass;
}

int run_embed(const Command& cmd, io::RunManifest& man) {
  const Kernel k = io::kernel_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, k.max_abs());
  try {
    const CndEmbedding emb = cnd_embedding(k, tol);
    ++man.pass_count;
    emit_json(cmd, io::embedding_to_json(emb));
    return kExitPass;
  } catch (const EmbeddingInfeasibleError& e) {
    ++man.fail_count;
    json out{{"error", e.what()}};
    if (e.cnd_witness) {
      json w = json::array();
      for (Eigen::Index i = 0; i < e.cnd_witness->size(); ++i) {
        w.push_back(json::array({(*e.cnd_witness)(i).real(), (*e.cnd_witness)(i).imag()}));
      }
      out["witness"] = w;
    }
    emit_json(cmd, out);
    return kExitMathFail;
  }
}

int run_classify_cost(const Command& cmd, io::RunManifest& man) {
  const CostMatrix a = io::cost_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, a.max_abs());
  const SemigroupClassification cls = classify_cost(a, tol, cmd.seed);
  (cls.feasible ? man.pass_count : man.fail_count)++;
  emit_json(cmd, io::semigroup_classification_to_json(cls));
  return cls.feasible ? kExitPass : kExitMathFail;
}

int run_norm(const Command& cmd, io::RunManifest& man) {
  const SchattenIndex p = parse_p(cmd.p_spec);
  const SchurSymbol a = io::symbol_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, a.max_abs());
  const NormReport rep = schur_p_norm(a, p, tol, cmd.seed);
  emit_json(cmd, io::norm_report_to_json(rep));
  const bool endpoint = p.is(1.0) || p.is(2.0) || p.is_infinite();
  if (endpoint && !rep.exact) {
    ++man.fail_count;
    return kExitNoConverge;
  }
  ++man.pass_count;
  return kExitPass;
}

int run_probe(const Command& cmd, io::RunManifest& man) {
  const SchattenIndex p = parse_p(cmd.p_spec);
  const CostMatrix a = io::cost_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, a.max_abs());
  const ProbeReport rep = beurling_probe(a, cmd.t, cmd.n, p, cmd.d, tol, cmd.seed);
  emit_json(cmd, io::probe_to_json(rep));
  switch (rep.verdict) {
    case ProbeReport::Verdict::strictly_below:
      ++man.pass_count;
      return kExitPass;
    case ProbeReport::Verdict::at_or_above:
      ++man.fail_count;
      return kExitMathFail;
    default:
      ++man.fail_count;
      return kExitNoConverge;
  }
}

int run_sweep(const Command& cmd, io::RunManifest& man) {
  const std::vector<double> grid = parse_grid(cmd.grid_spec);
  const SchattenIndex p = parse_p(cmd.p_spec);
  const CostMatrix a = io::cost_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, a.max_abs());
  const std::vector<ProbeReport> rows =
      sector_margin_sweep(a, grid, cmd.n, p, cmd.d, tol, cmd.seed);
  for (const ProbeReport& r : rows) {
    (r.verdict == ProbeReport::Verdict::strictly_below ? man.pass_count : man.fail_count)++;
  }
  emit(cmd, io::sweep_csv(rows));
  return kExitPass;
}

int run_transfer(const Command& cmd, io::RunManifest& man) {
  const SchattenIndex p = parse_p(cmd.p_spec);
  const CyclicMultiplier mult = io::multiplier_from_json(io::load_json_file(cmd.input));
  double max_abs = 0.0;
  for (Eigen::Index i = 0; i < mult.phi.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(mult.phi(i)));
  }
  const ToleranceConfig tol = resolve_tolerances(cmd, max_abs);
  const TransferReport rep = transfer_check(mult, p, tol, cmd.seed);
  const char* outcome = rep.outcome == TransferReport::Outcome::pass   ? "pass"
                        : rep.outcome == TransferReport::Outcome::fail ? "fail"
                                                                       : "inconclusive";
  emit_json(cmd, json{{"lhs", io::norm_report_to_json(rep.lhs, false)},
                      {"rhs", io::norm_report_to_json(rep.rhs, false)},
                      {"slack", rep.slack},
                      {"outcome", outcome}});
  switch (rep.outcome) {
    case TransferReport::Outcome::pass:
      ++man.pass_count;
      return kExitPass;
    case TransferReport::Outcome::fail:
      ++man.fail_count;
      return kExitMathFail;
    default:
      ++man.fail_count;
      return kExitNoConverge;
  }
}

int run_absorb(const Command& cmd, io::RunManifest& man) {
  const SchattenIndex p = parse_p(cmd.p_spec);
  const BlockElement x = io::block_element_from_json(io::load_json_file(cmd.input));
  const ToleranceConfig tol = resolve_tolerances(cmd, 1.0);
  const AbsorptionReport rep = absorption_check(x, cmd.n, p);
  const double rel = rep.diff / std::max(1.0, rep.rhs);
  bool ok = rel <= std::max(tol.residual_tol, 1e-8);
  json out{{"equality",
            json{{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"diff", rep.diff}, {"relative", rel}}}};
  if (!cmd.symbol_path.empty()) {
    const SchurSymbol a = io::symbol_from_json(io::load_json_file(cmd.symbol_path));
    const MultiplierPowerReport mp = absorption_multiplier_check(a, cmd.n, p, tol, cmd.seed);
    ok = ok && mp.slack >= -std::max(tol.residual_tol, 1e-8);
    out["companion"] = json{{"small_lower", mp.small_lower},
                            {"base_upper", mp.base_upper},
                            {"big_upper", mp.big_upper},
                            {"slack", mp.slack}};
  }
  emit_json(cmd, out);
  (ok ? man.pass_count : man.fail_count)++;
  return ok ? kExitPass : kExitMathFail;
}

int run_selftest(const Command& cmd, io::RunManifest& man) {
  const std::vector<selftest::CriterionResult> results =
      selftest::run_acceptance(cmd.seed, &std::cout);
  for (const selftest::CriterionResult& r : results) {
    (r.pass ? man.pass_count : man.fail_count)++;
  }
  return man.fail_count == 0 ? kExitPass : kExitMathFail;
}

int execute(const Command& cmd, io::RunManifest& man) {
  if (cmd.verb == "classify-kernel") return run_classify_kernel(cmd, man);
  if (cmd.verb == "embed") return run_embed(cmd, man);
  if (cmd.verb == "classify-cost") return run_classify_cost(cmd, man);
  if (cmd.verb == "norm") return run_norm(cmd, man);
  if (cmd.verb == "probe") return run_probe(cmd, man);
  if (cmd.verb == "sweep") return run_sweep(cmd, man);
  if (cmd.verb == "transfer") return run_transfer(cmd, man);
  if (cmd.verb == "absorb") return run_absorb(cmd, man);
  if (cmd.verb == "selftest") return run_selftest(cmd, man);
  throw InputError("unknown verb: " + cmd.verb);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for Schur-multiplier semigroups on finite index sets"};
  app.require_subcommand(1);

  Command cmd;

  auto add_common = [&cmd](CLI::App* sub, bool with_input = true) {
    if (with_input) {
      sub->add_option("input", cmd.input, "input JSON document")->required();
    }
    sub->add_option("-o,--output", cmd.output, "write the result to this file");
    sub->add_option("--manifest", cmd.manifest_path, "write the run manifest to this file");
    sub->add_option("--seed", cmd.seed, "seed for randomized subroutines");
    sub->add_option("--tol", cmd.tol_flag, "residual tolerance override");
    sub->add_option("--eig-tol", cmd.eig_flag, "eigenvalue slack override");
    sub->add_option("--max-iter", cmd.max_iter_flag, "iteration cap override");
  };

  CLI::App* ck = app.add_subcommand("classify-kernel", "hermitian / PD / CND classification");
  add_common(ck);
  ck->add_option("--what", cmd.what, "hermitian, pd, cnd or all")
      ->check(CLI::IsMember({"hermitian", "pd", "cnd", "all"}));

  add_common(app.add_subcommand("embed", "Hilbert-space embedding of a CND kernel"));
  add_common(app.add_subcommand("classify-cost",
                                "decide the squared-distance embedding of a cost matrix"));

  CLI::App* norm = app.add_subcommand("norm", "Schatten-p multiplier norm of a symbol");
  add_common(norm);
  norm->add_option("--p", cmd.p_spec, "Schatten exponent (number >= 1 or inf)");

  CLI::App* probe = app.add_subcommand("probe", "analyticity probe of (Id - T_t)^n");
  add_common(probe);
  probe->add_option("--t", cmd.t, "time")->required();
  probe->add_option("--n", cmd.n, "power")->required();
  probe->add_option("--p", cmd.p_spec, "Schatten exponent");
  probe->add_option("--d", cmd.d, "block amplification size");

  CLI::App* sweep = app.add_subcommand("sweep", "probe over a time grid, CSV output");
  add_common(sweep);
  sweep->add_option("--grid", cmd.grid_spec, "lin:a:b:k or log:a:b:k")->required();
  sweep->add_option("--n", cmd.n, "power")->required();
  sweep->add_option("--p", cmd.p_spec, "Schatten exponent");
  sweep->add_option("--d", cmd.d, "block amplification size");

  CLI::App* transfer = app.add_subcommand("transfer", "Fourier vs Schur transference check");
  add_common(transfer);
  transfer->add_option("--p", cmd.p_spec, "Schatten exponent");

  CLI::App* absorb = app.add_subcommand("absorb", "absorption identity on a block element");
  add_common(absorb);
  absorb->add_option("--n", cmd.n, "tensor depth")->required();
  absorb->add_option("--p", cmd.p_spec, "Schatten exponent");
  absorb->add_option("--symbol", cmd.symbol_path,
                     "also check the companion inequality for this symbol");

  add_common(app.add_subcommand("selftest", "run the acceptance battery"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  cmd.verb = app.get_subcommands().front()->get_name();

  io::RunManifest man;
  {
    std::ostringstream echo;
    for (int i = 0; i < argc; ++i) echo << (i ? " " : "") << argv[i];
    man.command = echo.str();
  }
  man.seed = cmd.seed;

  const auto start = std::chrono::steady_clock::now();
  int code = kExitUsage;
  try {
    code = execute(cmd, man);
  } catch (const GridError& e) {
    std::cerr << "grid error: " << e.what() << "\n";
    return kExitBadGrid;
  } catch (const io::FileError& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return kExitBadFile;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  man.wall_time_ms = std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  const std::string manifest_text = io::manifest_to_json(man).dump(2);
  if (!cmd.manifest_path.empty()) {
    io::write_text_file(cmd.manifest_path, manifest_text);
  } else {
    std::cerr << manifest_text << "\n";
  }
  return code;
}
