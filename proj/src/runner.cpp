#include "qlim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qlim/geometry.hpp"
#include "qlim/oracles.hpp"
#include "qlim/random.hpp"
#include "qlim/tensor_lab.hpp"

namespace qlim {

std::string toString(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CmConvergence: return "cm-convergence";
    case ExperimentKind::NormLimit: return "norm-limit";
    case ExperimentKind::PsiStarSweep: return "psistar-sweep";
    case ExperimentKind::StinespringPeak: return "stinespring-peak";
    case ExperimentKind::WeylInvariance: return "weyl-invariance";
    case ExperimentKind::EbTensor: return "eb-tensor";
    case ExperimentKind::OutputCloud: return "output-cloud";
  }
  return "unknown";
}

std::string toString(ChannelFamily family) {
  switch (family) {
    case ChannelFamily::MixedUnitary: return "mixed-unitary";
    case ChannelFamily::Stinespring: return "stinespring";
    case ChannelFamily::Depolarizing: return "depolarizing";
  }
  return "unknown";
}

std::string toString(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::FlatRankOne: return "flat-rank-one";
    case ProbeKind::RandomPure: return "random-pure";
    case ProbeKind::Explicit: return "explicit";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void configFail(std::string_view key, const std::string& msg) {
  fail(ErrorKind::ConfigError, std::string(key) + ": " + msg);
}

template <class T>
T parseNumber(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    configFail(key, "cannot parse '" + std::string(text) + "' as a number");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(value)) configFail(key, "value must be finite");
  return value;
}

template <class T>
std::vector<T> parseList(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto part : split(text, ',')) out.push_back(parseNumber<T>(key, part));
  return out;
}

ComplexMatrix parseMatrix(std::string_view key, std::string_view text) {
  std::vector<Complex> entries;
  for (auto pair : split(text, ';')) {
    const auto parts = split(pair, ',');
    if (parts.size() != 2) configFail(key, "entries must be 're,im' pairs separated by ';'");
    entries.emplace_back(parseNumber<double>(key, parts[0]), parseNumber<double>(key, parts[1]));
  }
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  if (dim * dim != static_cast<Eigen::Index>(entries.size()))
    configFail(key, std::to_string(entries.size()) + " entries do not form a square matrix");
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = entries[static_cast<std::size_t>(i * dim + j)];
  return m;
}

std::string toString(ResultFormat f) { return f == ResultFormat::Csv ? "csv" : "json"; }

template <class Enum>
Enum parseEnum(std::string_view key, std::string_view text, std::initializer_list<Enum> options) {
  std::string allowed;
  for (Enum e : options) {
    if (toString(e) == text) return e;
    allowed += (allowed.empty() ? "" : ", ") + toString(e);
  }
  configFail(key, "unknown value '" + std::string(text) + "' (expected one of " + allowed + ")");
}

}  // namespace

ExperimentConfig parseConfig(std::string_view text) {
  ExperimentConfig cfg;
  bool sawExperiment = false;
  std::map<std::string, int, std::less<>> seen;
  int lineNo = 0;
  for (auto raw : split(text, '\n')) {
    ++lineNo;
    auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::ConfigError, "line " + std::to_string(lineNo) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (seen[std::string(key)]++) configFail(key, "given more than once");
    if (value.empty()) configFail(key, "empty value");

    if (key == "experiment") {
      cfg.experiment = parseEnum(key, value,
                                 {ExperimentKind::CmConvergence, ExperimentKind::NormLimit, ExperimentKind::PsiStarSweep,
                                  ExperimentKind::StinespringPeak, ExperimentKind::WeylInvariance,
                                  ExperimentKind::EbTensor, ExperimentKind::OutputCloud});
      sawExperiment = true;
    } else if (key == "channel") {
      cfg.channel = parseEnum(key, value,
                              {ChannelFamily::MixedUnitary, ChannelFamily::Stinespring, ChannelFamily::Depolarizing});
    } else if (key == "k") {
      cfg.k = parseNumber<int>(key, value);
    } else if (key == "weights") {
      const auto w = parseList<double>(key, value);
      cfg.weights = Eigen::Map<const RealVector>(w.data(), static_cast<Eigen::Index>(w.size()));
    } else if (key == "t") {
      cfg.t = parseNumber<double>(key, value);
    } else if (key == "n_grid") {
      cfg.nGrid = parseList<int>(key, value);
    } else if (key == "trials") {
      cfg.trials = parseNumber<int>(key, value);
    } else if (key == "seed") {
      cfg.masterSeed = parseNumber<std::uint64_t>(key, value);
    } else if (key == "m") {
      cfg.m = parseNumber<int>(key, value);
    } else if (key == "probe") {
      cfg.probe = parseEnum(key, value, {ProbeKind::FlatRankOne, ProbeKind::RandomPure, ProbeKind::Explicit});
    } else if (key == "probe_matrix") {
      cfg.probeMatrix = parseMatrix(key, value);
    } else if (key == "restarts") {
      cfg.restarts = parseNumber<int>(key, value);
    } else if (key == "iterations") {
      cfg.iterations = parseNumber<int>(key, value);
    } else if (key == "r_grid") {
      cfg.rGrid = parseList<double>(key, value);
    } else if (key == "l") {
      cfg.l = parseNumber<int>(key, value);
    } else if (key == "q") {
      cfg.q = parseNumber<int>(key, value);
    } else if (key == "xi_input") {
      cfg.xiInput = parseNumber<int>(key, value);
    } else if (key == "weyl_a") {
      cfg.weylA = parseNumber<int>(key, value);
    } else if (key == "weyl_b") {
      cfg.weylB = parseNumber<int>(key, value);
    } else if (key == "samples") {
      cfg.samples = parseNumber<int>(key, value);
    } else if (key == "output") {
      cfg.outputPath = std::string(value);
    } else if (key == "format") {
      cfg.format = parseEnum(key, value, {ResultFormat::Csv, ResultFormat::Json});
    } else {
      configFail(key, "unknown key");
    }
  }
  if (!sawExperiment) fail(ErrorKind::ConfigError, "experiment: missing");
  validateConfig(cfg);
  return cfg;
}

ExperimentConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::IoError, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfig(buf.str());
}

namespace {

bool usesGrid(ExperimentKind e) { return e != ExperimentKind::PsiStarSweep; }

ChannelFamily effectiveFamily(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::StinespringPeak:
    case ExperimentKind::EbTensor: return ChannelFamily::Stinespring;
    default: return cfg.channel;
  }
}

Eigen::Index channelInputDim(const ExperimentConfig& cfg, int n) {
  if (effectiveFamily(cfg) == ChannelFamily::Stinespring)
    return StinespringRegime{cfg.k, cfg.t, {}}.inputDim(n);
  return n;
}

}  // namespace

void validateConfig(const ExperimentConfig& cfg) {
  if (cfg.k < 2) configFail("k", "must be at least 2");
  if (cfg.trials < 1) configFail("trials", "must be at least 1");
  if (cfg.m < 1) configFail("m", "must be at least 1");
  if (cfg.restarts < 1) configFail("restarts", "must be at least 1");
  if (cfg.iterations < 1) configFail("iterations", "must be at least 1");
  if (cfg.samples < 1) configFail("samples", "must be at least 1");
  if (!(cfg.t > 0.0 && cfg.t < 1.0)) configFail("t", "must lie in (0, 1)");
  if (cfg.weights) {
    if (cfg.weights->size() != cfg.k) configFail("weights", "need exactly k entries");
    try {
      WeightVector::create(*cfg.weights);
    } catch (const Error& e) {
      configFail("weights", e.what());
    }
  }
  if (usesGrid(cfg.experiment)) {
    if (cfg.nGrid.empty()) configFail("n_grid", "required for " + toString(cfg.experiment));
    for (int n : cfg.nGrid) {
      if (n < 1) configFail("n_grid", "entries must be positive");
      try {
        if (cfg.experiment == ExperimentKind::CmConvergence && cfg.m > channelInputDim(cfg, n))
          configFail("m", "exceeds the channel input dimension at n = " + std::to_string(n));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        configFail("t", e.what());
      }
    }
  }
  if (cfg.experiment == ExperimentKind::PsiStarSweep)
    for (double r : cfg.rGrid)
      if (!(r > 0.0 && r < 1.0)) configFail("r_grid", "entries must lie in (0, 1)");
  if (cfg.probe == ProbeKind::Explicit) {
    if (!cfg.probeMatrix) configFail("probe_matrix", "required when probe = explicit");
    if (cfg.probeMatrix->rows() != cfg.k) configFail("probe_matrix", "must be k x k");
    try {
      DensityMatrix::fromMatrix(*cfg.probeMatrix);
    } catch (const Error& e) {
      configFail("probe_matrix", e.what());
    }
  }
  if (cfg.experiment == ExperimentKind::WeylInvariance) {
    if (cfg.weylA < 0 || cfg.weylA >= cfg.k) configFail("weyl_a", "must lie in [0, k)");
    if (cfg.weylB < 0 || cfg.weylB >= cfg.k) configFail("weyl_b", "must lie in [0, k)");
  }
  if (cfg.experiment == ExperimentKind::EbTensor) {
    if (cfg.l < 1 || cfg.q < 1 || cfg.xiInput < 1) configFail("l", "l, q and xi_input must be positive");
    if (cfg.l > cfg.xiInput) configFail("l", "a projective POVM with l elements needs xi_input >= l");
  }
}

// ---------------------------------------------------------------------------
// experiments

namespace {

struct TrialContext {
  const ExperimentConfig& cfg;
  int n;
  int trial;
  SeededRng rng;
};

WeightVector configWeights(const ExperimentConfig& cfg) {
  return cfg.weights ? WeightVector::create(*cfg.weights) : WeightVector::flat(cfg.k);
}

Channel sampleChannel(TrialContext& ctx) {
  const auto& cfg = ctx.cfg;
  switch (effectiveFamily(cfg)) {
    case ChannelFamily::MixedUnitary: return sampleMixedUnitaryChannel(cfg.k, ctx.n, configWeights(cfg), ctx.rng);
    case ChannelFamily::Stinespring:
      return sampleStinespringChannel(cfg.k, ctx.n, channelInputDim(cfg, ctx.n), ctx.rng);
    case ChannelFamily::Depolarizing: return makeDepolarizing(cfg.k, ctx.n);
  }
  fail(ErrorKind::ConfigError, "channel: unsupported family");
}

DensityMatrix sampleProbe(TrialContext& ctx) {
  switch (ctx.cfg.probe) {
    case ProbeKind::FlatRankOne: return DensityMatrix::pure(ComplexVector::Ones(ctx.cfg.k));
    case ProbeKind::RandomPure: return DensityMatrix::pure(samplePureState(ctx.cfg.k, ctx.rng));
    case ProbeKind::Explicit: return DensityMatrix::fromMatrix(*ctx.cfg.probeMatrix);
  }
  fail(ErrorKind::ConfigError, "probe: unsupported kind");
}

// f(A) for the configured family where a closed form exists.
std::optional<double> limitValue(const ExperimentConfig& cfg, const DensityMatrix& a) {
  if (effectiveFamily(cfg) == ChannelFamily::Depolarizing) return 1.0 / cfg.k;
  if (effectiveFamily(cfg) != ChannelFamily::MixedUnitary) return std::nullopt;
  const EigenSystem es = hermitianEigs(a.matrix());
  if (std::abs(es.eigenvalues[0] - 1.0) > 1e-10) return std::nullopt;
  return fwRankOne(es.eigenvectors.col(0), configWeights(cfg));
}

ExperimentRecord baseRecord(const TrialContext& ctx, std::string probe) {
  ExperimentRecord r;
  r.experiment = toString(ctx.cfg.experiment);
  r.trial = ctx.trial;
  r.seed = ctx.cfg.masterSeed;
  r.n = ctx.n;
  r.k = ctx.cfg.k;
  r.probe = std::move(probe);
  return r;
}

void setTarget(ExperimentRecord& r, std::optional<double> target) {
  r.target = target;
  if (target && !r.values.empty()) r.error = std::abs(r.values.front() - *target);
}

std::vector<ExperimentRecord> runCmConvergence(TrialContext& ctx) {
  const DensityMatrix a = sampleProbe(ctx);
  const Channel ch = sampleChannel(ctx);
  const CmProbe probe = cmProbe(ch, a, ctx.cfg.m);
  ExperimentRecord r = baseRecord(ctx, toString(ctx.cfg.probe));
  r.values.assign(probe.topEigenvalues.begin(), probe.topEigenvalues.end());
  setTarget(r, limitValue(ctx.cfg, a));
  return {r};
}

std::optional<double> normTarget(const ExperimentConfig& cfg) {
  switch (effectiveFamily(cfg)) {
    case ChannelFamily::MixedUnitary: return mixedUnitaryNormLimit(configWeights(cfg));
    case ChannelFamily::Stinespring: return stinespringPeakEigenvalue(cfg.k, cfg.t);
    case ChannelFamily::Depolarizing: return 1.0 / cfg.k;
  }
  return std::nullopt;
}

std::vector<ExperimentRecord> runNormLimit(TrialContext& ctx) {
  const Channel ch = sampleChannel(ctx);
  const NormEstimate est = estimateNormOneInf(ch, ctx.cfg.restarts, ctx.cfg.iterations, ctx.rng);
  ExperimentRecord r = baseRecord(ctx, "ascent");
  r.values = {est.value};
  if (ctx.cfg.experiment == ExperimentKind::StinespringPeak)
    r.values.push_back(vonNeumannEntropy(DensityMatrix::normalize(est.output)));
  setTarget(r, normTarget(ctx.cfg));
  return {r};
}

std::vector<ExperimentRecord> runWeylInvariance(TrialContext& ctx) {
  const DensityMatrix a = sampleProbe(ctx);
  const Channel ch = sampleChannel(ctx);
  const ComplexMatrix w = weylOperator(ctx.cfg.weylA, ctx.cfg.weylB, ctx.cfg.k);
  const double before = hermitianEigenvalues(adjointApply(ch, a))[0];
  const double after = hermitianEigenvalues(adjointApply(ch, ComplexMatrix(w * a.matrix() * w.adjoint())))[0];
  ExperimentRecord r = baseRecord(ctx, toString(ctx.cfg.probe));
  r.values = {before, after, after - before};
  setTarget(r, limitValue(ctx.cfg, a));
  return {r};
}

EBChannel sampleProjectiveEB(const ExperimentConfig& cfg, SeededRng& rng) {
  const ComplexMatrix u = haarUnitary(cfg.xiInput, rng);
  std::vector<ComplexMatrix> povm(static_cast<std::size_t>(cfg.l), ComplexMatrix::Zero(cfg.xiInput, cfg.xiInput));
  for (int c = 0; c < cfg.xiInput; ++c) povm[static_cast<std::size_t>(c % cfg.l)] += u.col(c) * u.col(c).adjoint();
  std::vector<DensityMatrix> states;
  for (int i = 0; i < cfg.l; ++i) {
    const ComplexMatrix g = complexGinibre(cfg.q, cfg.q, rng);
    states.push_back(DensityMatrix::normalize(g * g.adjoint()));
  }
  return makeEB(std::move(povm), std::move(states));
}

std::vector<ExperimentRecord> runEbTensor(TrialContext& ctx) {
  const EBChannel xi = sampleProjectiveEB(ctx.cfg, ctx.rng);
  const Channel psi = sampleChannel(ctx);
  const ComplexVector b = samplePureState(inputDim(psi) * xi.inputDim(), ctx.rng);
  const DensityMatrix out = ebTensorOutput(xi, psi, b);
  const EBTensorDecomposition d = ebTensorDecompose(xi, psi, reshapeBipartite(b, inputDim(psi), xi.inputDim()));
  double weightSum = 0.0;
  for (double r : d.weights) weightSum += r;
  ExperimentRecord r = baseRecord(ctx, "projective");
  r.values = {maxAbs(reconstruct(d, xi, psi) - out.matrix()), std::abs(weightSum - 1.0)};
  setTarget(r, 0.0);
  return {r};
}

std::vector<ExperimentRecord> runOutputCloud(TrialContext& ctx) {
  const Channel ch = sampleChannel(ctx);
  std::vector<ExperimentRecord> records;
  for (const DensityMatrix& x : sampleOutputs(ch, ctx.cfg.samples, ctx.rng)) {
    ExperimentRecord r = baseRecord(ctx, "output-" + std::to_string(records.size()));
    const RealVector spectrum = hermitianEigenvalues(x.matrix());
    r.values.assign(spectrum.begin(), spectrum.end());
    r.values.push_back(vonNeumannEntropy(spectrum));
    records.push_back(std::move(r));
  }
  return records;
}

// w_r = (r, (1 - r)/(k - 1), ..., (1 - r)/(k - 1)).
RealVector sweepWeights(int k, double r) {
  RealVector w = RealVector::Constant(k, (1.0 - r) / (k - 1));
  w[0] = r;
  return w;
}

ExperimentRecord psiStarRecord(const ExperimentConfig& cfg, int index, const WeightVector& w, double r) {
  const PsiStarResult res = psiStar(w);
  ExperimentRecord rec;
  rec.experiment = toString(cfg.experiment);
  rec.trial = index;
  rec.seed = cfg.masterSeed;
  rec.n = 0;
  rec.k = cfg.k;
  rec.probe = formatSubset(res.argmaxSubset);
  rec.values = {res.value, res.value * res.value, r};
  return rec;
}

using Task = std::function<std::vector<ExperimentRecord>()>;

std::vector<ExperimentRecord> runTasks(const std::vector<Task>& tasks, int threads) {
  std::vector<std::vector<ExperimentRecord>> slots(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        slots[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, threads));
  if (count == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(count, tasks.size()); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Report the failure of the earliest task so the error is schedule-independent.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ExperimentRecord> out;
  for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<ExperimentRecord> runExperiment(const ExperimentConfig& cfg, int threads) {
  validateConfig(cfg);
  std::vector<Task> tasks;

  if (cfg.experiment == ExperimentKind::PsiStarSweep) {
    if (cfg.rGrid.empty()) {
      tasks.push_back([&cfg] { return std::vector{psiStarRecord(cfg, 0, configWeights(cfg), 0.0)}; });
    } else {
      for (std::size_t i = 0; i < cfg.rGrid.size(); ++i)
        tasks.push_back([&cfg, i] {
          const double r = cfg.rGrid[i];
          return std::vector{psiStarRecord(cfg, static_cast<int>(i), WeightVector::create(sweepWeights(cfg.k, r)), r)};
        });
    }
    return runTasks(tasks, threads);
  }

  std::function<std::vector<ExperimentRecord>(TrialContext&)> body;
  switch (cfg.experiment) {
    case ExperimentKind::CmConvergence: body = runCmConvergence; break;
    case ExperimentKind::NormLimit:
    case ExperimentKind::StinespringPeak: body = runNormLimit; break;
    case ExperimentKind::WeylInvariance: body = runWeylInvariance; break;
    case ExperimentKind::EbTensor: body = runEbTensor; break;
    case ExperimentKind::OutputCloud: body = runOutputCloud; break;
    case ExperimentKind::PsiStarSweep: break;
  }
  for (std::size_t g = 0; g < cfg.nGrid.size(); ++g)
    for (int t = 0; t < cfg.trials; ++t) {
      const auto stream = static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(cfg.trials) +
                          static_cast<std::uint64_t>(t);
      tasks.push_back([&cfg, &body, g, t, stream] {
        TrialContext ctx{cfg, cfg.nGrid[g], t, SeededRng(cfg.masterSeed, stream)};
        return body(ctx);
      });
    }
  return runTasks(tasks, threads);
}

// ---------------------------------------------------------------------------
// emission

namespace {

std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void writeCsv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& r : records) width = std::max(width, r.values.size());
  out << "experiment,trial,seed,n,k,probe";
  for (std::size_t i = 1; i <= width; ++i) out << ",value" << i;
  out << ",target,error\n";
  for (const auto& r : records) {
    out << csvField(r.experiment) << ',' << r.trial << ',' << r.seed << ',' << r.n << ',' << r.k << ','
        << csvField(r.probe);
    for (std::size_t i = 0; i < width; ++i) {
      out << ',';
      if (i < r.values.size()) out << formatDouble(r.values[i]);
    }
    out << ',' << (r.target ? formatDouble(*r.target) : "") << ',' << (r.error ? formatDouble(*r.error) : "")
        << '\n';
  }
}

void writeJson(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["k"] = r.k;
    j["probe"] = r.probe;
    j["values"] = r.values;
    j["target"] = r.target ? nlohmann::ordered_json(*r.target) : nlohmann::ordered_json(nullptr);
    j["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace

void emitResults(const std::vector<ExperimentRecord>& records, ResultFormat format, std::ostream& out) {
  require(!records.empty(), ErrorKind::EmptyResults, "no records to emit");
  if (format == ResultFormat::Csv)
    writeCsv(records, out);
  else
    writeJson(records, out);
  require(static_cast<bool>(out), ErrorKind::IoError, "write failed");
}

void emitResults(const std::vector<ExperimentRecord>& records, ResultFormat format, const std::string& path) {
  require(!records.empty(), ErrorKind::EmptyResults, "no records to emit");
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::IoError, "cannot open '" + path + "' for writing");
  emitResults(records, format, out);
  out.close();
  require(static_cast<bool>(out), ErrorKind::IoError, "cannot write '" + path + "'");
}

std::vector<ExperimentRecord> parseJsonResults(std::string_view text) {
  std::vector<ExperimentRecord> records;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc) {
      ExperimentRecord r;
      r.experiment = j.at("experiment").get<std::string>();
      r.trial = j.at("trial").get<int>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.n = j.at("n").get<int>();
      r.k = j.at("k").get<int>();
      r.probe = j.at("probe").get<std::string>();
      r.values = j.at("values").get<std::vector<double>>();
      if (!j.at("target").is_null()) r.target = j.at("target").get<double>();
      if (!j.at("error").is_null()) r.error = j.at("error").get<double>();
      records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::IoError, std::string("malformed results JSON: ") + e.what());
  }
  return records;
}

}  // namespace qlim
