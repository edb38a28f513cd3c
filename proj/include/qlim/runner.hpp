#pragma once

// Batch experiment driver: config parsing, trial scheduling and result files.
//
// Config files are flat `key = value` lines; `#` starts a comment. Lists are
// comma-separated, explicit matrices are row-major semicolon-separated
// complex pairs "re,im".

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlim/linalg.hpp"

namespace qlim {

enum class ExperimentKind { CmConvergence, NormLimit, PsiStarSweep, StinespringPeak, WeylInvariance, EbTensor, OutputCloud };
enum class ChannelFamily { MixedUnitary, Stinespring, Depolarizing };
enum class ProbeKind { FlatRankOne, RandomPure, Explicit };
enum class ResultFormat { Csv, Json };

std::string toString(ExperimentKind kind);
std::string toString(ChannelFamily family);
std::string toString(ProbeKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CmConvergence;
  ChannelFamily channel = ChannelFamily::MixedUnitary;
  int k = 2;
  std::optional<RealVector> weights;  // flat when absent
  double t = 0.3;
  std::vector<int> nGrid;
  int trials = 1;
  std::uint64_t masterSeed = 0;
  int m = 1;
  ProbeKind probe = ProbeKind::FlatRankOne;
  std::optional<ComplexMatrix> probeMatrix;
  int restarts = 4;
  int iterations = 100;
  std::vector<double> rGrid;  // psistar-sweep: w_r = (r, (1-r)/(k-1), ...)
  int l = 2;                  // eb-tensor: POVM size
  int q = 2;                  // eb-tensor: Xi output dimension
  int xiInput = 2;            // eb-tensor: Xi input dimension p
  int weylA = 1;
  int weylB = 0;
  int samples = 16;
  std::optional<std::string> outputPath;
  ResultFormat format = ResultFormat::Csv;
};

/// Throws ConfigError naming the offending key.
ExperimentConfig parseConfig(std::string_view text);
/// Throws IoError when the file cannot be read.
ExperimentConfig loadConfig(const std::string& path);
/// Cross-field checks; throws ConfigError.
void validateConfig(const ExperimentConfig& cfg);

struct ExperimentRecord {
  std::string experiment;
  int trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  std::string probe;
  std::vector<double> values;
  std::optional<double> target;
  std::optional<double> error;  // |values[0] - target|

  bool operator==(const ExperimentRecord&) const = default;
};

/// Records ordered by (grid point, trial) regardless of `threads`. Trial t at
/// grid index g draws from stream g * trials + t of the master seed.
std::vector<ExperimentRecord> runExperiment(const ExperimentConfig& cfg, int threads = 1);

/// Throws EmptyResults for an empty record list.
void emitResults(const std::vector<ExperimentRecord>& records, ResultFormat format, std::ostream& out);
/// Writes to `path`; throws IoError when the file cannot be written.
void emitResults(const std::vector<ExperimentRecord>& records, ResultFormat format, const std::string& path);

std::vector<ExperimentRecord> parseJsonResults(std::string_view text);

}  // namespace qlim
