#pragma once

// Seeded synthetic panels with planted contemporaneous coupling between rate
// signals. Used as the ground-truth oracle for direction recovery.
//
// Per entity and year, variables are drawn in topological order of the
// coupling graph:
//
//   source:  s = D                       D ~ driver distribution, unit variance
//   target:  s = sum_k w_k * s_driver_k + sqrt(1 - sum_k w_k^2) * noise_sd * N(0, 1)
//
// and the rate is rate_scale * s. Rates are integrated into level series that
// start at 100: own-normalized variables grow multiplicatively (growth factor
// clipped at 0.01 so levels stay positive), revenue-normalized variables
// change additively by rate * revenue(t). Running the transforms on the
// generated levels therefore recovers the planted rates.
//
// A Gaussian driver makes (source, target) exchangeable after
// standardization, so VC correlation has no direction to find; the Laplace
// default gives the heavier tails that large-move conditioning picks up.
//
// RNG: each entity k gets std::mt19937_64 seeded with
// splitmix64(seed + 0x9E3779B97F4A7C15 * (k + 1)); draws are entity-major,
// year-minor, variable order within a year. Entity k's series depend only on
// (spec minus n_entities, k).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vcnet/keyvalue.hpp"
#include "vcnet/panel_store.hpp"

namespace vcnet {

struct Coupling {
  std::string driver;
  std::string target;
  double strength = 0.0;
};

enum class DriverDistribution { laplace, normal };

struct SynthSpec {
  std::size_t n_entities = 100;
  std::size_t n_years = 29;
  int start_year = 1990;
  std::vector<VariableId> variables;
  std::vector<Coupling> coupling;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  double rate_scale = 0.1;
  DriverDistribution driver = DriverDistribution::laplace;
  NormalizationMap normalization = NormalizationMap::defaults();
};

/// Throws SpecError on: no variables, duplicate codes, n_years < 5,
/// n_entities == 0, non-positive noise_sd or rate_scale, unknown coupling
/// variables, strength outside [0, 1], squared strengths into one target
/// summing past 1, a cyclic coupling graph, or a revenue-normalized variable
/// without the revenue variable.
void validate(const SynthSpec& spec);

/// Variable indices in a stable topological order of the coupling graph.
std::vector<std::size_t> topological_order(const SynthSpec& spec);

Dataset generate(const SynthSpec& spec);

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Keys: n_entities, n_years, start_year, variables (comma list),
/// labels (code:label list), coupling ("x -> y : 0.8" comma list), noise_sd,
/// seed, rate_scale, driver_distribution (laplace | normal),
/// revenue_normalized (code list), denominator (code).
SynthSpec parse_synth_spec(const KeyValueConfig& config);
SynthSpec parse_synth_spec(std::istream& in);

/// One-paragraph human summary printed by `simulate`.
std::string describe(const SynthSpec& spec);

}  // namespace vcnet
