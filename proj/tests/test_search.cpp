#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "hyperinfo/info.hpp"
#include "hyperinfo/io.hpp"
#include "hyperinfo/search.hpp"
#include "oracles.hpp"

using namespace hyperinfo;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& stem) {
    path = std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(::getpid()) + ".json");
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

std::vector<int> random_perm(int n, std::mt19937_64& rng) {
  return oracle::random_permutation(n, rng);
}

}  // namespace

TEST_CASE("transform: permutation, flips and output negation") {
  const BooleanFunction d1 = BooleanFunction::dictator(2, 1);
  const BooleanFunction d2 = BooleanFunction::dictator(2, 2);
  CHECK(transform(d1, {1, 0}, 0, false) == d2);
  CHECK(transform(d1, {0, 1}, 1, false) == d1.negated());
  CHECK(transform(d1, {0, 1}, 0, true) == d1.negated());
  CHECK(transform(d1, {0, 1}, 2, false) == d1);  // flipping x2 is invisible to x1
  CHECK_THROWS_AS(transform(d1, {0, 1, 2}, 0, false), std::invalid_argument);

  // group action: composition lands back in the orbit and preserves weight structure
  std::mt19937_64 rng(1000);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const BooleanFunction b = oracle::random_boolean(n, rng);
    const auto perm = random_perm(n, rng);
    const auto flip = static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << n) - 1));
    const bool neg = rng() & 1;
    const BooleanFunction tb = transform(b, perm, flip, neg);
    const std::int64_t ones = neg ? b.size() - b.count_ones() : b.count_ones();
    CHECK(tb.count_ones() == ones);
  }
}

TEST_CASE("canonicalize: orbit minimum, invariant under the group") {
  const BooleanFunction d1 = BooleanFunction::dictator(2, 1);
  CHECK(canonicalize(d1) == canonicalize(d1.negated()));
  CHECK(canonicalize(d1) == canonicalize(BooleanFunction::dictator(2, 2)));
  CHECK(canonicalize(d1).packed() == 3);
  CHECK(canonicalize(BooleanFunction::dictator(3, 2)).packed() == 15);

  std::mt19937_64 rng(1100);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const BooleanFunction b = oracle::random_boolean(n, rng);
    const BooleanFunction cb = canonicalize(b);
    CHECK(canonicalize(cb) == cb);
    CHECK(cb.packed() <= b.packed());
    const BooleanFunction tb =
        transform(b, random_perm(n, rng),
                  static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << n) - 1)), rng() & 1);
    CHECK(canonicalize(tb) == cb);
  }
  CHECK_THROWS_AS(canonicalize(BooleanFunction::parity(6)), std::invalid_argument);
}

TEST_CASE("canonical classes: counts, coverage, brute-force agreement") {
  const std::int64_t expected[] = {0, 2, 4, 14, 222};
  for (int n = 1; n <= 4; ++n) {
    const auto classes = enumerate_canonical(n);
    CHECK(std::ssize(classes) == expected[n]);
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      covered += classes[i].orbit_size;
      if (i > 0) CHECK(classes[i].representative > classes[i - 1].representative);
      // a representative is its own canonical form
      CHECK(canonicalize(BooleanFunction::from_packed(n, classes[i].representative)).packed() ==
            classes[i].representative);
    }
    CHECK(covered == std::int64_t{1} << (std::int64_t{1} << n));

    const auto brute = oracle::npn_classes_brute(n);
    REQUIRE(brute.size() == classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      CHECK(brute[i].first == classes[i].representative);
      CHECK(brute[i].second == classes[i].orbit_size);
    }
  }
  CHECK_THROWS_AS(enumerate_canonical(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_canonical(6, true), std::invalid_argument);
}

TEST_CASE("resource guard: n = 5 needs the long-run flag") {
  CHECK_THROWS_AS(enumerate_canonical(5), ResourceGuardError);
  CHECK_THROWS_AS(verify_ck(5, {0.25}), ResourceGuardError);
  CHECK_THROWS_AS(concentration_report(5, NoiseParams::from_alpha(0.25), 1.0), ResourceGuardError);
}

TEST_CASE("information quantities are class invariants") {
  std::mt19937_64 rng(1200);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const BooleanFunction b = oracle::random_boolean(n, rng);
    const BooleanFunction tb =
        transform(b, random_perm(n, rng),
                  static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << n) - 1)), rng() & 1);
    const NoiseParams p =
        NoiseParams::from_alpha(0.02 + 0.47 * std::uniform_real_distribution<double>(0, 1)(rng));
    CHECK(std::abs(mutual_information(b, p) - mutual_information(tb, p)) <= 1e-12);

    const MIReport ra = sum_coordinate_mi(b, p);
    const MIReport rb = sum_coordinate_mi(tb, p);
    CHECK(std::abs(ra.total_mi - rb.total_mi) <= 1e-12);
    std::vector<double> ca = ra.coord_mi, cb = rb.coord_mi;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    for (std::size_t i = 0; i < ca.size(); ++i) CHECK(std::abs(ca[i] - cb[i]) <= 1e-12);
  }
}

TEST_CASE("total-information scan: dictator alone sits on the capacity line") {
  const SearchReport rep = verify_ck(3, {0.3});
  CHECK(rep.class_count == 14);
  CHECK(rep.dictator_class == 15);
  CHECK(rep.completed);
  CHECK(rep.violation_count == 0);
  CHECK(rep.equality_only_dictator);
  REQUIRE(rep.per_alpha.size() == 1);
  const AlphaStats& st = rep.per_alpha[0];
  CHECK(std::abs(st.max_total_mi - 0.1187091007693073) <= 1e-12);
  CHECK(st.argmax_total_mi == 15);
  CHECK(st.equality_total_mi == std::vector<std::uint64_t>{15});
  CHECK(st.violation_count == 0);

  const SearchReport full = verify_ck(2, default_alpha_grid());
  CHECK(full.per_alpha.size() == 10);
  CHECK(full.class_count == 4);
  CHECK(full.violation_count == 0);
  CHECK(full.equality_only_dictator);
  for (const AlphaStats& s : full.per_alpha) {
    CHECK(std::abs(s.max_total_mi - s.capacity) <= 1e-12);
    CHECK(s.argmax_total_mi == full.dictator_class);
  }
}

TEST_CASE("erased channel: every class collapses to zero") {
  const SearchReport rep = verify_ck(2, {0.5});
  CHECK(rep.violation_count == 0);
  CHECK(std::abs(rep.per_alpha[0].max_total_mi) <= 1e-15);
  CHECK(rep.per_alpha[0].capacity == 0.0);
  // nothing strictly exceeds capacity, but everything ties it
  CHECK_FALSE(rep.equality_only_dictator);
}

TEST_CASE("coordinate-sum scan holds with full chain checks") {
  const SearchReport rep = verify_thm2(3, default_alpha_grid());
  CHECK(rep.violation_count == 0);
  CHECK(rep.equality_only_dictator);
  for (const AlphaStats& st : rep.per_alpha) {
    CHECK(st.max_sum_coord_mi <= st.capacity + 1e-10);
    CHECK(st.argmax_sum_coord_mi == rep.dictator_class);
  }
  const SearchReport rep4 = verify_thm2(4, {0.25});
  CHECK(rep4.class_count == 222);
  CHECK(rep4.violation_count == 0);
  CHECK(rep4.equality_only_dictator);
}

TEST_CASE("sharding does not change a single byte") {
  const std::vector<double> grid = default_alpha_grid();
  SearchOptions one;
  one.shards = 1;
  const std::string base = to_json(verify_ck(3, grid, one)).dump(2);

  for (int shards : {2, 8, 50}) {  // 50 > class count: some shards are empty
    SearchOptions opt;
    opt.shards = shards;
    CHECK(to_json(verify_ck(3, grid, opt)).dump(2) == base);
  }
  SearchOptions opt;
  opt.shards = 8;
  const std::string thm_base = to_json(verify_thm2(3, grid, one)).dump(2);
  CHECK(to_json(verify_thm2(3, grid, opt)).dump(2) == thm_base);
}

TEST_CASE("checkpoint: stop, resume, and converge to the uninterrupted bytes") {
  const std::vector<double> grid = {0.1, 0.25, 0.4};
  const std::string base = to_json(verify_ck(3, grid)).dump(2);

  TempFile ck("hyperinfo-resume");
  SearchOptions stop_opt;
  stop_opt.shards = 14;
  stop_opt.checkpoint_path = ck.path.string();
  stop_opt.checkpoint_interval = 1;
  stop_opt.stop_after_classes = 5;
  const SearchReport partial = verify_ck(3, grid, stop_opt);
  CHECK_FALSE(partial.completed);
  REQUIRE(std::filesystem::exists(ck.path));

  {
    std::ifstream in(ck.path);
    nlohmann::json doc;
    in >> doc;
    CHECK(doc.at("format_version").get<int>() == kCheckpointFormatVersion);
    CHECK(doc.at("n").get<int>() == 3);
    CHECK(doc.at("cursor").get<std::int64_t>() == 5);
    CHECK(doc.at("alpha_grid").get<std::vector<double>>() == grid);
    CHECK(doc.at("partial_maxima").size() == grid.size());
    CHECK(doc.at("timestamp").get<std::string>().size() == 20);
  }

  SearchOptions resume_opt;
  resume_opt.shards = 3;
  resume_opt.checkpoint_path = ck.path.string();
  const SearchReport resumed = verify_ck(3, grid, resume_opt);
  CHECK(resumed.completed);
  CHECK(to_json(resumed).dump(2) == base);

  // resuming a finished run must also be stable
  const SearchReport again = verify_ck(3, grid, resume_opt);
  CHECK(to_json(again).dump(2) == base);
}

TEST_CASE("checkpoint: mismatches and corruption are fatal") {
  const std::vector<double> grid = {0.25};
  TempFile ck("hyperinfo-mismatch");
  SearchOptions opt;
  opt.shards = 4;
  opt.checkpoint_path = ck.path.string();
  opt.checkpoint_interval = 1;
  verify_ck(2, grid, opt);
  REQUIRE(std::filesystem::exists(ck.path));

  SearchOptions wrong = opt;
  CHECK_THROWS_AS(verify_ck(3, grid, wrong), CheckpointError);          // n mismatch
  CHECK_THROWS_AS(verify_ck(2, {0.25, 0.3}, wrong), CheckpointError);   // grid mismatch

  {
    nlohmann::json doc;
    std::ifstream in(ck.path);
    in >> doc;
    in.close();
    doc["cursor"] = 99;
    std::ofstream out(ck.path, std::ios::trunc);
    out << doc.dump(2);
  }
  CHECK_THROWS_AS(verify_ck(2, grid, opt), CheckpointError);  // cursor beyond class count

  {
    std::ofstream out(ck.path, std::ios::trunc);
    out << "this is not a checkpoint";
  }
  CHECK_THROWS_AS(verify_ck(2, grid, opt), CheckpointError);

  {
    nlohmann::json doc;
    doc["format_version"] = kCheckpointFormatVersion + 1;
    std::ofstream out(ck.path, std::ios::trunc);
    out << doc.dump(2);
  }
  CHECK_THROWS_AS(verify_ck(2, grid, opt), CheckpointError);
}

TEST_CASE("concentration: at tau = 1 only the dictator class survives") {
  const NoiseParams p = NoiseParams::from_alpha(0.25);
  const auto rows = concentration_report(3, p, 1.0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].representative == 15);
  CHECK(rows[0].mu == 0.0);
  CHECK(std::abs(rows[0].mi - capacity(p)) <= 1e-12);
  CHECK(std::abs(rows[0].xi) <= 1e-15);
  CHECK(std::abs(rows[0].xi_over_lambda) <= 1e-15);

  const auto wide = concentration_report(3, NoiseParams::from_alpha(0.4), 0.9);
  CHECK(wide.size() >= 1);
  const double cap = capacity(0.4);
  for (std::size_t i = 0; i < wide.size(); ++i) {
    CHECK(wide[i].mi >= 0.9 * cap - 1e-10);
    CHECK(wide[i].xi >= -1e-15);
    CHECK(std::abs(wide[i].xi_over_lambda - wide[i].xi / NoiseParams::from_alpha(0.4).lambda) <= 1e-15);
    if (i > 0) CHECK(wide[i].representative > wide[i - 1].representative);
  }

  CHECK_THROWS_AS(concentration_report(3, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(concentration_report(3, p, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(concentration_report(3, NoiseParams::from_alpha(0.5), 1.0), std::domain_error);
}

TEST_CASE("default alpha grid") {
  const std::vector<double> g = default_alpha_grid();
  REQUIRE(g.size() == 10);
  CHECK(g.front() == 0.05);
  CHECK(std::abs(g[8] - 0.45) <= 1e-15);
  CHECK(g.back() == 0.49);
  CHECK(std::is_sorted(g.begin(), g.end()));
}
