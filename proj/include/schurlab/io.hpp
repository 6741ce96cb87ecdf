#pragma once

#include "schurlab/kernels.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/semigroup.hpp"
#include "schurlab/transference.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace schurlab::io {

inline constexpr const char* kToolVersion = "0.1.0";

// Unreadable or syntactically invalid input file.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

// Matrix values: flat row-major list (or list of rows) whose entries are
// numbers or [re, im] pairs; real matrices may omit the imaginary part.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& values, Eigen::Index expected = -1);

json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const json& j);

json symbol_to_json(const SchurSymbol& a);
SchurSymbol symbol_from_json(const json& j);

json cost_to_json(const CostMatrix& a);
CostMatrix cost_from_json(const json& j);

json multiplier_to_json(const CyclicMultiplier& m);
CyclicMultiplier multiplier_from_json(const json& j);

json block_element_to_json(const BlockElement& x);
BlockElement block_element_from_json(const json& j);

json schatten_to_json(SchattenIndex p);
SchattenIndex schatten_from_json(const json& j);

json classification_to_json(const ClassificationResult& r);
json norm_report_to_json(const NormReport& r, bool include_witness = true);
json embedding_to_json(const CndEmbedding& e);
json witness_to_json(const EmbeddingWitness& w);
json semigroup_classification_to_json(const SemigroupClassification& c);
json probe_to_json(const ProbeReport& r);

const char* verdict_name(ProbeReport::Verdict v);

// CSV with the exact header t,lower,upper,threshold,margin,verdict.
std::string sweep_csv(const std::vector<ProbeReport>& rows);

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  int pass_count = 0;
  int fail_count = 0;
};

json manifest_to_json(const RunManifest& m);

}  // namespace schurlab::io
