#include "hyperinfo/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <thread>

#include <json.hpp>

#include "hyperinfo/entropy.hpp"
#include "hyperinfo/fourier.hpp"
#include "hyperinfo/info.hpp"
#include "hyperinfo/oq1.hpp"

namespace hyperinfo {

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::int64_t permute_bits(std::int64_t m, const std::vector<int>& perm) {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    r |= ((m >> perm[i]) & 1) << i;
  return r;
}

// Point maps of the full group (n! permutations x 2^n flips), flattened so the
// orbit scan is pure table lookups. map[p][m] = permute_bits(m, perm_p).
struct GroupTables {
  int n;
  std::int64_t size;
  std::vector<std::vector<std::int64_t>> perm_point;

  explicit GroupTables(int n_) : n(n_), size(std::int64_t{1} << n_) {
    for (const auto& perm : all_permutations(n)) {
      std::vector<std::int64_t> pts(static_cast<std::size_t>(size));
      for (std::int64_t m = 0; m < size; ++m) pts[static_cast<std::size_t>(m)] = permute_bits(m, perm);
      perm_point.push_back(std::move(pts));
    }
  }
};

std::uint64_t apply_element(std::uint64_t table, const std::vector<std::int64_t>& pts,
                            std::int64_t flip, std::int64_t size) {
  std::uint64_t out = 0;
  for (std::int64_t m = 0; m < size; ++m)
    out |= ((table >> (pts[static_cast<std::size_t>(m)] ^ flip)) & 1) << m;
  return out;
}

std::uint64_t table_mask(std::int64_t size) {
  return size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
}

std::uint64_t canonical_of(std::uint64_t table, const GroupTables& g) {
  const std::uint64_t mask = table_mask(g.size);
  std::uint64_t best = ~std::uint64_t{0};
  for (const auto& pts : g.perm_point) {
    for (std::int64_t flip = 0; flip < g.size; ++flip) {
      const std::uint64_t cand = apply_element(table, pts, flip, g.size);
      best = std::min(best, std::min(cand, ~cand & mask));
    }
  }
  return best;
}

int worker_thread_cap() {
  if (const char* env = std::getenv("HYPERINFO_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

BooleanFunction transform(const BooleanFunction& b, const std::vector<int>& perm,
                          std::uint32_t flip_mask, bool negate_output) {
  const int n = b.dimension();
  if (std::ssize(perm) != n) throw std::invalid_argument("transform: permutation length mismatch");
  BooleanFunction out(n);
  for (std::int64_t m = 0; m < b.size(); ++m) {
    const std::int64_t src = permute_bits(m, perm) ^ static_cast<std::int64_t>(flip_mask);
    out.set_bit(m, b.bit(src) != negate_output);
  }
  return out;
}

BooleanFunction canonicalize(const BooleanFunction& b) {
  if (b.dimension() > 5) throw std::invalid_argument("canonicalize: n must be <= 5");
  const GroupTables g(b.dimension());
  return BooleanFunction::from_packed(b.dimension(), canonical_of(b.packed(), g));
}

std::vector<CanonicalClass> enumerate_canonical(int n, bool allow_long_run) {
  if (n > 5) throw std::invalid_argument("enumerate_canonical: n must be <= 5");
  if (n < 1) throw std::invalid_argument("enumerate_canonical: n must be >= 1");
  if (n == 5 && !allow_long_run)
    throw ResourceGuardError("enumerate_canonical: n = 5 walks 2^32 tables; pass the long-run flag");

  const GroupTables g(n);
  const std::int64_t size = g.size;
  const std::uint64_t total = std::uint64_t{1} << size;  // 2^(2^n) tables
  std::vector<bool> seen(total, false);
  std::vector<CanonicalClass> classes;
  std::vector<std::uint64_t> orbit;
  orbit.reserve(2 * static_cast<std::size_t>(size) * g.perm_point.size());
  const std::uint64_t mask = table_mask(size);

  for (std::uint64_t t = 0; t < total; ++t) {
    if (seen[t]) continue;
    // ascending scan: the first unseen table is its orbit's minimum
    orbit.clear();
    for (const auto& pts : g.perm_point) {
      for (std::int64_t flip = 0; flip < size; ++flip) {
        const std::uint64_t cand = apply_element(t, pts, flip, size);
        orbit.push_back(cand);
        orbit.push_back(~cand & mask);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    for (std::uint64_t o : orbit) seen[o] = true;
    classes.push_back({t, static_cast<std::int64_t>(orbit.size())});
  }
  return classes;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(0.05 * i);
  g.push_back(0.49);
  return g;
}

namespace {

using nlohmann::json;

struct AlphaAccum {
  double alpha = 0;
  double capacity_bits = 0;
  double max_total_mi = -1.0;  // MI is nonnegative; -1 is the neutral element
  std::uint64_t argmax_total_mi = 0;
  double max_sum_coord_mi = -1.0;
  std::uint64_t argmax_sum_coord_mi = 0;
  std::vector<std::uint64_t> equality_total_mi;
  std::vector<std::uint64_t> equality_sum_coord_mi;
  std::vector<SearchViolation> violations;

  void merge(const AlphaAccum& other) {
    if (other.max_total_mi > max_total_mi) {
      max_total_mi = other.max_total_mi;
      argmax_total_mi = other.argmax_total_mi;
    }
    if (other.max_sum_coord_mi > max_sum_coord_mi) {
      max_sum_coord_mi = other.max_sum_coord_mi;
      argmax_sum_coord_mi = other.argmax_sum_coord_mi;
    }
    equality_total_mi.insert(equality_total_mi.end(), other.equality_total_mi.begin(),
                             other.equality_total_mi.end());
    equality_sum_coord_mi.insert(equality_sum_coord_mi.end(), other.equality_sum_coord_mi.begin(),
                                 other.equality_sum_coord_mi.end());
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

// Evaluates one class at one alpha and folds it into the accumulator;
// records both objectives plus the per-bias chain so checkpoints stay
// task-agnostic.
void eval_class(std::uint64_t rep, int n, const NoiseParams& p, AlphaAccum& acc) {
  const BooleanFunction b = BooleanFunction::from_packed(n, rep);
  const double full_mi = mutual_information(b, p);
  const MIReport r = sum_coordinate_mi(b, p);
  const double sum_mi = r.total_mi;
  const double cap = acc.capacity_bits;

  if (full_mi > acc.max_total_mi) {
    acc.max_total_mi = full_mi;
    acc.argmax_total_mi = rep;
  }
  if (sum_mi > acc.max_sum_coord_mi) {
    acc.max_sum_coord_mi = sum_mi;
    acc.argmax_sum_coord_mi = rep;
  }
  if (full_mi >= cap - kViolationTolerance) acc.equality_total_mi.push_back(rep);
  if (sum_mi >= cap - kViolationTolerance) acc.equality_sum_coord_mi.push_back(rep);

  if (full_mi > cap + kViolationTolerance)
    acc.violations.push_back({"total_mi_gt_capacity", p.alpha, rep, full_mi, cap});
  if (sum_mi > cap + kViolationTolerance)
    acc.violations.push_back({"sum_coord_gt_capacity", p.alpha, rep, sum_mi, cap});

  const double abs_mu = std::abs(r.mu);
  if (abs_mu < 1.0) {
    const double epb = extreme_point_bound(n, r.mu, p);
    const double mk = m_k((1.0 + abs_mu) / (1.0 - abs_mu), p);
    if (sum_mi > epb + kViolationTolerance)
      acc.violations.push_back({"chain_link", p.alpha, rep, sum_mi, epb});
    else if (epb > mk + kViolationTolerance)
      acc.violations.push_back({"chain_link", p.alpha, rep, epb, mk});
    else if (mk > cap + kViolationTolerance)
      acc.violations.push_back({"chain_link", p.alpha, rep, mk, cap});
  }
}

json violation_to_json(const SearchViolation& v) {
  return json{{"kind", v.kind},
              {"alpha", v.alpha},
              {"representative", v.representative},
              {"value", v.value},
              {"bound", v.bound}};
}

SearchViolation violation_from_json(const json& j) {
  SearchViolation v;
  v.kind = j.at("kind").get<std::string>();
  v.alpha = j.at("alpha").get<double>();
  v.representative = j.at("representative").get<std::uint64_t>();
  v.value = j.at("value").get<double>();
  v.bound = j.at("bound").get<double>();
  return v;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_checkpoint(const std::string& path, int n, const std::vector<double>& alpha_grid,
                      std::int64_t cursor, const std::vector<AlphaAccum>& accums) {
  json doc;
  doc["format_version"] = kCheckpointFormatVersion;
  doc["n"] = n;
  doc["alpha_grid"] = alpha_grid;
  doc["cursor"] = cursor;
  json maxima = json::array();
  for (const auto& a : accums) {
    json entry;
    entry["alpha"] = a.alpha;
    entry["capacity"] = a.capacity_bits;
    entry["max_total_mi"] = a.max_total_mi;
    entry["argmax_total_mi"] = a.argmax_total_mi;
    entry["max_sum_coord_mi"] = a.max_sum_coord_mi;
    entry["argmax_sum_coord_mi"] = a.argmax_sum_coord_mi;
    entry["equality_total_mi"] = a.equality_total_mi;
    entry["equality_sum_coord_mi"] = a.equality_sum_coord_mi;
    json viols = json::array();
    for (const auto& v : a.violations) viols.push_back(violation_to_json(v));
    entry["violations"] = viols;
    maxima.push_back(entry);
  }
  doc["partial_maxima"] = maxima;
  doc["timestamp"] = iso_timestamp();

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::int64_t load_checkpoint(const std::string& path, int n, const std::vector<double>& alpha_grid,
                             std::vector<AlphaAccum>& accums) {
  json doc;
  try {
    std::ifstream in(path, std::ios::binary);
    in >> doc;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format_version").get<int>() != kCheckpointFormatVersion)
      throw CheckpointError("checkpoint format version mismatch");
    if (doc.at("n").get<int>() != n) throw CheckpointError("checkpoint n mismatch");
    if (doc.at("alpha_grid").get<std::vector<double>>() != alpha_grid)
      throw CheckpointError("checkpoint alpha grid mismatch");
    const auto& maxima = doc.at("partial_maxima");
    if (maxima.size() != accums.size()) throw CheckpointError("checkpoint grid size mismatch");
    for (std::size_t i = 0; i < accums.size(); ++i) {
      AlphaAccum& a = accums[i];
      const json& entry = maxima[i];
      if (entry.at("alpha").get<double>() != a.alpha) throw CheckpointError("checkpoint alpha mismatch");
      a.max_total_mi = entry.at("max_total_mi").get<double>();
      a.argmax_total_mi = entry.at("argmax_total_mi").get<std::uint64_t>();
      a.max_sum_coord_mi = entry.at("max_sum_coord_mi").get<double>();
      a.argmax_sum_coord_mi = entry.at("argmax_sum_coord_mi").get<std::uint64_t>();
      a.equality_total_mi = entry.at("equality_total_mi").get<std::vector<std::uint64_t>>();
      a.equality_sum_coord_mi = entry.at("equality_sum_coord_mi").get<std::vector<std::uint64_t>>();
      a.violations.clear();
      for (const auto& vj : entry.at("violations")) a.violations.push_back(violation_from_json(vj));
    }
    return doc.at("cursor").get<std::int64_t>();
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
}

}  // namespace

SearchReport run_sharded(SearchTask task, int n, const std::vector<double>& alpha_grid,
                         const SearchOptions& options) {
  if (options.shards < 1) throw std::invalid_argument("run_sharded: shards must be >= 1");
  const auto t_start = std::chrono::steady_clock::now();

  const std::vector<CanonicalClass> classes = enumerate_canonical(n, options.allow_long_run);
  const std::int64_t total = std::ssize(classes);

  std::vector<NoiseParams> params;
  std::vector<AlphaAccum> accums;
  for (double a : alpha_grid) {
    params.push_back(NoiseParams::from_alpha(a));
    AlphaAccum acc;
    acc.alpha = a;
    acc.capacity_bits = capacity(params.back());
    accums.push_back(acc);
  }

  std::int64_t cursor = 0;
  const bool use_checkpoint = !options.checkpoint_path.empty();
  if (use_checkpoint && std::filesystem::exists(options.checkpoint_path))
    cursor = load_checkpoint(options.checkpoint_path, n, alpha_grid, accums);
  if (cursor > total) throw CheckpointError("checkpoint cursor beyond class count");

  // contiguous shard ranges over the remaining classes
  const std::int64_t remaining = total - cursor;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  for (int s = 0; s < options.shards; ++s) {
    const std::int64_t lo = cursor + remaining * s / options.shards;
    const std::int64_t hi = cursor + remaining * (s + 1) / options.shards;
    ranges.emplace_back(lo, hi);
  }

  const int max_workers = std::max(1, std::min<int>(worker_thread_cap(), options.shards));
  std::int64_t last_checkpoint = cursor;
  bool stopped = false;

  for (std::size_t batch = 0; batch < ranges.size() && !stopped; batch += static_cast<std::size_t>(max_workers)) {
    const std::size_t batch_end = std::min(ranges.size(), batch + static_cast<std::size_t>(max_workers));
    std::vector<std::vector<AlphaAccum>> partials(batch_end - batch);

    auto run_shard = [&](std::size_t idx) {
      std::vector<AlphaAccum> local;
      for (std::size_t ai = 0; ai < accums.size(); ++ai) {
        AlphaAccum a;
        a.alpha = accums[ai].alpha;
        a.capacity_bits = accums[ai].capacity_bits;
        local.push_back(a);
      }
      const auto [lo, hi] = ranges[batch + idx];
      for (std::int64_t c = lo; c < hi; ++c)
        for (std::size_t ai = 0; ai < local.size(); ++ai)
          eval_class(classes[static_cast<std::size_t>(c)].representative, n, params[ai], local[ai]);
      partials[idx] = std::move(local);
    };

    if (batch_end - batch == 1) {
      run_shard(0);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t i = 0; i < partials.size(); ++i) threads.emplace_back(run_shard, i);
      for (auto& t : threads) t.join();
    }

    // merge in shard order so the reduction is identical to a sequential pass
    for (std::size_t i = 0; i < partials.size() && !stopped; ++i) {
      for (std::size_t ai = 0; ai < accums.size(); ++ai) accums[ai].merge(partials[i][ai]);
      cursor = ranges[batch + i].second;
      const bool stop_here = options.stop_after_classes > 0 && cursor >= options.stop_after_classes &&
                             cursor < total;
      if (use_checkpoint && (stop_here || cursor - last_checkpoint >= options.checkpoint_interval)) {
        write_checkpoint(options.checkpoint_path, n, alpha_grid, cursor, accums);
        last_checkpoint = cursor;
      }
      if (stop_here) stopped = true;
    }
  }
  // final write marks the run finished, so a later resume is a pure reload
  if (use_checkpoint && !stopped && cursor > last_checkpoint)
    write_checkpoint(options.checkpoint_path, n, alpha_grid, cursor, accums);

  SearchReport report;
  report.task = task;
  report.n = n;
  report.alpha_grid = alpha_grid;
  report.class_count = total;
  report.completed = !stopped;
  report.dictator_class = canonicalize(BooleanFunction::dictator(n)).packed();

  const bool task_is_total = task == SearchTask::total_mi;
  report.equality_only_dictator = true;
  for (auto& acc : accums) {
    AlphaStats st;
    st.alpha = acc.alpha;
    st.capacity = acc.capacity_bits;
    st.max_total_mi = acc.max_total_mi;
    st.argmax_total_mi = acc.argmax_total_mi;
    st.max_sum_coord_mi = acc.max_sum_coord_mi;
    st.argmax_sum_coord_mi = acc.argmax_sum_coord_mi;
    st.equality_total_mi = acc.equality_total_mi;
    st.equality_sum_coord_mi = acc.equality_sum_coord_mi;
    st.violations = acc.violations;
    for (const auto& v : acc.violations) {
      const bool counts = task_is_total ? v.kind == "total_mi_gt_capacity"
                                        : v.kind != "total_mi_gt_capacity";
      if (counts) ++st.violation_count;
    }
    report.violation_count += st.violation_count;
    const auto& eq = task_is_total ? st.equality_total_mi : st.equality_sum_coord_mi;
    if (eq.size() != 1 || eq.front() != report.dictator_class) report.equality_only_dictator = false;
    report.per_alpha.push_back(std::move(st));
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

SearchReport verify_ck(int n, const std::vector<double>& alpha_grid, const SearchOptions& options) {
  return run_sharded(SearchTask::total_mi, n, alpha_grid, options);
}

SearchReport verify_thm2(int n, const std::vector<double>& alpha_grid, const SearchOptions& options) {
  return run_sharded(SearchTask::sum_coord_mi, n, alpha_grid, options);
}

std::vector<ConcentrationRow> concentration_report(int n, const NoiseParams& p, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("concentration_report: tau must be in (0,1]");
  if (p.lambda <= 0.0) throw std::domain_error("concentration_report: needs lambda > 0");
  const double cap = capacity(p);
  std::vector<ConcentrationRow> rows;
  for (const CanonicalClass& cls : enumerate_canonical(n)) {
    const BooleanFunction b = BooleanFunction::from_packed(n, cls.representative);
    const double mi = mutual_information(b, p);
    if (mi < tau * cap - 1e-10) continue;
    const FourierSpectrum s = wht(to_real(b));
    double xi = 0;
    for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask)
      if (std::popcount(static_cast<std::uint64_t>(mask)) >= 2) xi += s.coeffs[mask] * s.coeffs[mask];
    rows.push_back({cls.representative, s.coeffs[0], mi, xi, xi / p.lambda});
  }
  return rows;
}

}  // namespace hyperinfo
