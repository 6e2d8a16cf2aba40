#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperinfo/boolean_function.hpp"
#include "hyperinfo/noise.hpp"

namespace hyperinfo {

inline constexpr int kCheckpointFormatVersion = 1;

// Thrown when a run would exceed desk scale without explicit opt-in.
struct ResourceGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on corrupt or incompatible checkpoint files.
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Orbit of a truth table under input permutation, input negation and output
// negation; representative is the numerically smallest packed table.
struct CanonicalClass {
  std::uint64_t representative = 0;
  std::int64_t orbit_size = 0;
};

// b'(m) = (-1)^negate_output * b(permute_bits(m) ^ flip_mask) where bit i of
// permute_bits(m) is bit perm[i] of m; perm is 0-based of length n.
BooleanFunction transform(const BooleanFunction& b, const std::vector<int>& perm,
                          std::uint32_t flip_mask, bool negate_output);

// Minimal orbit element; n <= 5.
BooleanFunction canonicalize(const BooleanFunction& b);

// All canonical classes in ascending order of representative. n <= 4 unless
// allow_long_run; n = 5 walks 2^32 tables and takes hours.
std::vector<CanonicalClass> enumerate_canonical(int n, bool allow_long_run = false);

enum class SearchTask { total_mi, sum_coord_mi };

struct SearchViolation {
  std::string kind;  // "total_mi_gt_capacity" | "sum_coord_gt_capacity" | "chain_link"
  double alpha = 0;
  std::uint64_t representative = 0;
  double value = 0;
  double bound = 0;
};

struct AlphaStats {
  double alpha = 0;
  double capacity = 0;
  double max_total_mi = 0;
  std::uint64_t argmax_total_mi = 0;
  double max_sum_coord_mi = 0;
  std::uint64_t argmax_sum_coord_mi = 0;
  // classes within 1e-10 of capacity under each objective
  std::vector<std::uint64_t> equality_total_mi;
  std::vector<std::uint64_t> equality_sum_coord_mi;
  std::int64_t violation_count = 0;  // for the task the report was built for
  std::vector<SearchViolation> violations;  // all kinds, any task
};

struct SearchReport {
  SearchTask task = SearchTask::total_mi;
  int n = 0;
  std::vector<double> alpha_grid;
  std::vector<AlphaStats> per_alpha;
  std::int64_t class_count = 0;
  std::uint64_t dictator_class = 0;
  std::int64_t violation_count = 0;
  bool equality_only_dictator = false;  // task objective touches capacity only at the dictator class
  bool completed = false;               // false when stopped early (stop_after_classes)
  double wall_time_seconds = 0;         // diagnostic only, never serialized
};

struct SearchOptions {
  int shards = 1;
  std::string checkpoint_path;            // empty: no checkpointing
  std::int64_t checkpoint_interval = 64;  // classes between checkpoint writes
  bool allow_long_run = false;
  std::int64_t stop_after_classes = 0;  // > 0: stop once this many classes are merged (test hook)
};

inline constexpr double kViolationTolerance = 1e-10;

std::vector<double> default_alpha_grid();  // {0.05, 0.10, ..., 0.45} and 0.49

SearchReport run_sharded(SearchTask task, int n, const std::vector<double>& alpha_grid,
                         const SearchOptions& options);

SearchReport verify_ck(int n, const std::vector<double>& alpha_grid,
                       const SearchOptions& options = {});

SearchReport verify_thm2(int n, const std::vector<double>& alpha_grid,
                         const SearchOptions& options = {});

// Rows of the near-maximizer table: every class with I(b;Y) >= tau * capacity
// (within 1e-10), with its bias and Fourier tail weight above level 1.
struct ConcentrationRow {
  std::uint64_t representative = 0;
  double mu = 0;
  double mi = 0;
  double xi = 0;
  double xi_over_lambda = 0;
};

std::vector<ConcentrationRow> concentration_report(int n, const NoiseParams& p, double tau);

}  // namespace hyperinfo
