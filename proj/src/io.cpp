#include "schurlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace schurlab::io {

namespace {

Complex entry_from_json(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() >= 1 && e.size() <= 2 && e[0].is_number() &&
      (e.size() == 1 || e[1].is_number())) {
    return Complex(e[0].get<double>(), e.size() == 2 ? e[1].get<double>() : 0.0);
  }
  throw FileError("matrix entry must be a number or an [re, im] pair");
}

bool looks_like_entry(const json& e) {
  if (e.is_number()) return true;
  if (!e.is_array() || e.empty() || e.size() > 2) return false;
  for (const json& v : e) {
    if (!v.is_number()) return false;
  }
  return true;
}

std::vector<std::string> labels_from_json(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const json& p : j.at(key)) {
    if (p.is_string()) {
      out.push_back(p.get<std::string>());
    } else if (p.is_number_integer()) {
      out.push_back(std::to_string(p.get<long long>()));
    } else if (p.is_number()) {
      out.push_back(format_double(p.get<double>()));
    } else {
      throw FileError("point labels must be strings or numbers");
    }
  }
  return out;
}

json labels_to_json(const std::vector<std::string>& labels) {
  json out = json::array();
  for (const std::string& l : labels) out.push_back(l);
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FileError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot open file for writing: " + path);
  out << text;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json matrix_to_json(const ComplexMatrix& m) {
  bool real = true;
  for (Eigen::Index j = 0; j < m.cols() && real; ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j).imag() != 0.0) {
        real = false;
        break;
      }
    }
  }
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (real) {
        out.push_back(m(i, j).real());
      } else {
        out.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
      }
    }
  }
  return out;
}

ComplexMatrix matrix_from_json(const json& values, Eigen::Index expected) {
  if (!values.is_array() || values.empty()) {
    throw FileError("matrix values must be a nonempty array");
  }
  const Eigen::Index outer = static_cast<Eigen::Index>(values.size());

  const bool rows_form = [&] {
    for (const json& row : values) {
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != outer) return false;
      for (const json& e : row) {
        if (!looks_like_entry(e)) return false;
      }
    }
    return true;
  }();

  const auto side = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(outer))));
  const bool flat_form = [&] {
    if (side * side != outer) return false;
    for (const json& e : values) {
      if (!looks_like_entry(e)) return false;
    }
    return true;
  }();

  auto read_nested = [&] {
    ComplexMatrix m(outer, outer);
    for (Eigen::Index i = 0; i < outer; ++i) {
      for (Eigen::Index j = 0; j < outer; ++j) {
        m(i, j) = entry_from_json(values[i][j]);
      }
    }
    return m;
  };
  auto read_flat = [&] {
    ComplexMatrix m(side, side);
    for (Eigen::Index i = 0; i < side; ++i) {
      for (Eigen::Index j = 0; j < side; ++j) {
        m(i, j) = entry_from_json(values[i * side + j]);
      }
    }
    return m;
  };

  if (expected >= 0) {
    if (flat_form && side == expected) return read_flat();
    if (rows_form && outer == expected) return read_nested();
    throw FileError("matrix values do not match the point-list size");
  }
  if (flat_form) return read_flat();
  if (rows_form) return read_nested();
  throw FileError("matrix values must be a flat row-major list or a list of rows");
}

json kernel_to_json(const Kernel& k) {
  return json{{"points", labels_to_json(k.points())}, {"values", matrix_to_json(k.values())}};
}

Kernel kernel_from_json(const json& j) {
  if (!j.is_object() || !j.contains("values")) {
    throw FileError("kernel document requires a values field");
  }
  std::vector<std::string> points = labels_from_json(j, "points");
  const Eigen::Index expected = points.empty() ? -1 : static_cast<Eigen::Index>(points.size());
  try {
    return Kernel(std::move(points), matrix_from_json(j.at("values"), expected));
  } catch (const ShapeError& e) {
    throw FileError(e.what());
  }
}

json symbol_to_json(const SchurSymbol& a) {
  return json{{"points", labels_to_json(a.labels())}, {"values", matrix_to_json(a.entries())}};
}

SchurSymbol symbol_from_json(const json& j) {
  Kernel k = kernel_from_json(j);
  return SchurSymbol(k.points(), k.values());
}

json cost_to_json(const CostMatrix& a) {
  return json{{"points", labels_to_json(a.labels())},
              {"values", matrix_to_json(a.entries().cast<Complex>())}};
}

CostMatrix cost_from_json(const json& j) {
  Kernel k = kernel_from_json(j);
  for (Eigen::Index col = 0; col < k.size(); ++col) {
    for (Eigen::Index row = 0; row < k.size(); ++row) {
      if (k.values()(row, col).imag() != 0.0) {
        throw FileError("cost matrix must be real");
      }
    }
  }
  return CostMatrix(k.points(), k.values().real());
}

json multiplier_to_json(const CyclicMultiplier& m) {
  json phi = json::array();
  bool real = true;
  for (Eigen::Index i = 0; i < m.phi.size(); ++i) {
    if (m.phi(i).imag() != 0.0) real = false;
  }
  for (Eigen::Index i = 0; i < m.phi.size(); ++i) {
    if (real) {
      phi.push_back(m.phi(i).real());
    } else {
      phi.push_back(json::array({m.phi(i).real(), m.phi(i).imag()}));
    }
  }
  return json{{"N", m.N}, {"phi", phi}};
}

CyclicMultiplier multiplier_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("phi")) {
    throw FileError("multiplier document requires N and phi fields");
  }
  const int n = j.at("N").get<int>();
  const json& phi = j.at("phi");
  if (!phi.is_array() || static_cast<int>(phi.size()) != n) {
    throw FileError("phi must be an array of length N");
  }
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = entry_from_json(phi[i]);
  try {
    return CyclicMultiplier(n, std::move(v));
  } catch (const std::invalid_argument& e) {
    throw FileError(e.what());
  }
}

json block_element_to_json(const BlockElement& x) {
  return json{{"m", x.m}, {"d", x.d}, {"values", matrix_to_json(x.entries)}};
}

BlockElement block_element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("d") || !j.contains("values")) {
    throw FileError("block element document requires m, d and values fields");
  }
  const Eigen::Index m = j.at("m").get<Eigen::Index>();
  const Eigen::Index d = j.at("d").get<Eigen::Index>();
  try {
    return BlockElement(m, d, matrix_from_json(j.at("values"), m * d));
  } catch (const std::invalid_argument& e) {
    throw FileError(e.what());
  }
}

json schatten_to_json(SchattenIndex p) {
  if (p.is_infinite()) return "inf";
  return p.p();
}

SchattenIndex schatten_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") {
      return SchattenIndex::infinity();
    }
    throw FileError("unrecognized Schatten index: " + s);
  }
  if (j.is_number()) return SchattenIndex(j.get<double>());
  throw FileError("Schatten index must be a number or \"inf\"");
}

json classification_to_json(const ClassificationResult& r) {
  json out{{"verdict", r.yes ? "yes" : "no"}, {"margin", r.margin}};
  if (r.witness) {
    json w = json::array();
    for (Eigen::Index i = 0; i < r.witness->size(); ++i) {
      w.push_back(json::array({(*r.witness)(i).real(), (*r.witness)(i).imag()}));
    }
    out["witness"] = w;
  }
  return out;
}

json norm_report_to_json(const NormReport& r, bool include_witness) {
  json out{{"p", schatten_to_json(r.p)},
           {"lower", r.lower},
           {"upper", r.upper},
           {"exact", r.exact}};
  if (include_witness && r.lower_witness) {
    out["witness"] = json{{"values", matrix_to_json(*r.lower_witness)}};
  }
  return out;
}

json embedding_to_json(const CndEmbedding& e) {
  json xi = json::array();
  for (Eigen::Index i = 0; i < e.xi.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < e.xi.cols(); ++k) row.push_back(e.xi(i, k));
    xi.push_back(row);
  }
  return json{{"points", labels_to_json(e.points)},
              {"xi", xi},
              {"dim", e.dim()},
              {"residual", e.residual}};
}

json witness_to_json(const EmbeddingWitness& w) {
  auto rows_to_json = [](const RealMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      out.push_back(row);
    }
    return out;
  };
  return json{{"alpha", rows_to_json(w.alpha)},
              {"beta", rows_to_json(w.beta)},
              {"dim", w.dim()},
              {"residual", w.residual}};
}

json semigroup_classification_to_json(const SemigroupClassification& c) {
  json out{{"verdict", c.feasible ? "feasible" : "infeasible"}};
  if (c.witness) out["witness"] = witness_to_json(*c.witness);
  if (c.certificate) {
    json cert{{"grade", c.certificate->grade == InfeasibilityCertificate::Grade::norm_bound
                            ? "norm_bound"
                            : "projection_residual"},
              {"projection_gap", c.certificate->projection_gap}};
    if (c.certificate->grade == InfeasibilityCertificate::Grade::norm_bound) {
      cert["t_star"] = c.certificate->t_star;
      if (c.certificate->norm_report) {
        cert["norm_report"] = norm_report_to_json(*c.certificate->norm_report);
      }
    }
    out["certificate"] = cert;
  }
  return out;
}

const char* verdict_name(ProbeReport::Verdict v) {
  switch (v) {
    case ProbeReport::Verdict::strictly_below:
      return "strictly-below";
    case ProbeReport::Verdict::at_or_above:
      return "at-or-above";
    default:
      return "inconclusive";
  }
}

json probe_to_json(const ProbeReport& r) {
  return json{{"t", r.t},       {"n", r.n},
              {"p", schatten_to_json(r.p)}, {"d", r.d},
              {"lower", r.lower},           {"upper", r.upper},
              {"threshold", r.threshold},   {"verdict", verdict_name(r.verdict)}};
}

std::string sweep_csv(const std::vector<ProbeReport>& rows) {
  std::ostringstream out;
  out << "t,lower,upper,threshold,margin,verdict\n";
  for (const ProbeReport& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.lower) << ',' << format_double(r.upper)
        << ',' << format_double(r.threshold) << ',' << format_double(r.threshold - r.upper)
        << ',' << verdict_name(r.verdict) << '\n';
  }
  return out.str();
}

json manifest_to_json(const RunManifest& m) {
  return json{{"tool_version", m.tool_version},
              {"command", m.command},
              {"seed", m.seed},
              {"wall_time_ms", m.wall_time_ms},
              {"checks", json{{"pass", m.pass_count}, {"fail", m.fail_count}}}};
}

}  // namespace schurlab::io
