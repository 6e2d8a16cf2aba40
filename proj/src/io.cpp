#include "hyperinfo/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace hyperinfo {

std::string format_double(double v) {
  char buf[40];  // shortest round-trip form
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

BooleanFunction read_truth_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("truth table: missing header line");
  while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) header.pop_back();
  if (header.rfind("n=", 0) != 0) throw std::invalid_argument("truth table: header must be n=<int>");
  int n = 0;
  const char* first = header.data() + 2;
  const char* last = header.data() + header.size();
  const auto parsed = std::from_chars(first, last, n);
  if (parsed.ec != std::errc{} || parsed.ptr != last)
    throw std::invalid_argument("truth table: bad dimension in header");
  std::string bits;
  char c;
  while (in.get(c)) {
    if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
    bits.push_back(c);
  }
  return BooleanFunction::from_string(n, bits);
}

BooleanFunction read_truth_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open truth table file: " + path);
  return read_truth_table(in);
}

void write_truth_table(std::ostream& out, const BooleanFunction& b) {
  out << "n=" << b.dimension() << '\n' << b.to_string() << '\n';
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string spectrum_csv(const FourierSpectrum& s) {
  std::string out = "mask,coeff\n";
  for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask) {
    if (s.coeffs[mask] == 0.0) continue;
    out += std::to_string(mask);
    out += ',';
    out += format_double(s.coeffs[mask]);
    out += '\n';
  }
  return out;
}

nlohmann::json spectrum_json(const FourierSpectrum& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::int64_t mask = 0; mask < s.coeffs.size(); ++mask) {
    if (s.coeffs[mask] == 0.0) continue;
    rows.push_back({{"mask", mask}, {"coeff", s.coeffs[mask]}});
  }
  return nlohmann::json{{"n", s.n}, {"coeffs", rows}};
}

nlohmann::json to_json(const MIReport& r) {
  return nlohmann::json{{"n", r.n},         {"alpha", r.alpha},       {"mu", r.mu},
                        {"total_mi", r.total_mi}, {"coord_mi", r.coord_mi}, {"z", r.z}};
}

std::string mi_csv(const MIReport& r) {
  std::string out = "key,value\n";
  out += "n," + std::to_string(r.n) + '\n';
  out += "alpha," + format_double(r.alpha) + '\n';
  out += "mu," + format_double(r.mu) + '\n';
  out += "total_mi," + format_double(r.total_mi) + '\n';
  for (std::size_t i = 0; i < r.coord_mi.size(); ++i)
    out += "coord_mi_" + std::to_string(i + 1) + ',' + format_double(r.coord_mi[i]) + '\n';
  for (std::size_t i = 0; i < r.z.size(); ++i)
    out += "z_" + std::to_string(i + 1) + ',' + format_double(r.z[i]) + '\n';
  return out;
}

std::string trace_jsonl(const CompressionTrace& t) {
  std::string out;
  for (const auto& s : t.steps) {
    nlohmann::json rec{{"coord", s.coord}, {"L_before", s.l_before}, {"L_after", s.l_after}};
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string trace_csv(const CompressionTrace& t) {
  std::string out = "coord,L_before,L_after\n";
  for (const auto& s : t.steps) {
    out += std::to_string(s.coord);
    out += ',';
    out += format_double(s.l_before);
    out += ',';
    out += format_double(s.l_after);
    out += '\n';
  }
  return out;
}

std::string bound_chain_csv(const BoundChainReport& r) {
  std::string out = "K,rho,M_K,M_K_prime,margin_vs_M1\n";
  for (const auto& p : r.points) {
    out += format_double(p.K);
    out += ',';
    out += format_double(p.rho);
    out += ',';
    out += format_double(p.m_k);
    out += ',';
    out += format_double(p.m_k_prime);
    out += ',';
    out += format_double(p.margin_vs_m1);
    out += '\n';
  }
  return out;
}

nlohmann::json bound_chain_json(const BoundChainReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points)
    points.push_back({{"K", p.K},
                      {"rho", p.rho},
                      {"M_K", p.m_k},
                      {"M_K_prime", p.m_k_prime},
                      {"margin_vs_M1", p.margin_vs_m1}});
  return nlohmann::json{{"points", points},
                        {"worst_value_margin", r.worst_value_margin},
                        {"worst_value_K", r.worst_value_K},
                        {"worst_value_rho", r.worst_value_rho},
                        {"worst_deriv_margin", r.worst_deriv_margin},
                        {"worst_deriv_K", r.worst_deriv_K},
                        {"worst_deriv_rho", r.worst_deriv_rho}};
}

namespace {

nlohmann::json violations_json(const std::vector<SearchViolation>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : vs)
    out.push_back({{"kind", v.kind},
                   {"alpha", v.alpha},
                   {"representative", v.representative},
                   {"value", v.value},
                   {"bound", v.bound}});
  return out;
}

}  // namespace

nlohmann::json to_json(const SearchReport& r) {
  nlohmann::json per_alpha = nlohmann::json::array();
  for (const auto& a : r.per_alpha)
    per_alpha.push_back({{"alpha", a.alpha},
                         {"capacity", a.capacity},
                         {"max_total_mi", a.max_total_mi},
                         {"argmax_total_mi", a.argmax_total_mi},
                         {"max_sum_coord_mi", a.max_sum_coord_mi},
                         {"argmax_sum_coord_mi", a.argmax_sum_coord_mi},
                         {"equality_total_mi", a.equality_total_mi},
                         {"equality_sum_coord_mi", a.equality_sum_coord_mi},
                         {"violation_count", a.violation_count},
                         {"violations", violations_json(a.violations)}});
  return nlohmann::json{
      {"task", r.task == SearchTask::total_mi ? "total_mi" : "sum_coord_mi"},
      {"n", r.n},
      {"alpha_grid", r.alpha_grid},
      {"class_count", r.class_count},
      {"dictator_class", r.dictator_class},
      {"violation_count", r.violation_count},
      {"equality_only_dictator", r.equality_only_dictator},
      {"completed", r.completed},
      {"per_alpha", per_alpha}};
}

std::string search_summary_csv(const SearchReport& r) {
  const bool task_is_total = r.task == SearchTask::total_mi;
  std::string out = "alpha,max_mi,max_sum_coord_mi,capacity,margin\n";
  for (const auto& a : r.per_alpha) {
    const double max_task = task_is_total ? a.max_total_mi : a.max_sum_coord_mi;
    // distance to the violation threshold; >= 0 means the bound held
    const double margin = a.capacity + kViolationTolerance - max_task;
    out += format_double(a.alpha);
    out += ',';
    out += format_double(a.max_total_mi);
    out += ',';
    out += format_double(a.max_sum_coord_mi);
    out += ',';
    out += format_double(a.capacity);
    out += ',';
    out += format_double(margin);
    out += '\n';
  }
  return out;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "lambda,quantity,value\n";
  for (const auto& [lambda, quantity, value] : rows) {
    out += format_double(lambda);
    out += ',';
    out += quantity;
    out += ',';
    out += format_double(value);
    out += '\n';
  }
  return out;
}

nlohmann::json fit_json(const std::string& quantity, const ScalingFit& f) {
  return nlohmann::json{{"quantity", quantity},
                        {"slope", f.slope},
                        {"intercept", f.intercept},
                        {"r2", f.r2},
                        {"n_points", f.n_points},
                        {"window", {f.window_lo, f.window_hi}}};
}

std::string threshold_csv(const ThresholdTable& t) {
  std::string out = "lambda,t_new,t_old,ratio\n";
  for (const auto& r : t.rows) {
    out += format_double(r.lambda);
    out += ',';
    out += format_double(r.t_new);
    out += ',';
    out += format_double(r.t_old);
    out += ',';
    out += format_double(r.ratio);
    out += '\n';
  }
  return out;
}

nlohmann::json threshold_json(const ThresholdTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back(
        {{"lambda", r.lambda}, {"t_new", r.t_new}, {"t_old", r.t_old}, {"ratio", r.ratio}});
  return nlohmann::json{{"rows", rows},
                        {"ratio_monotone", t.ratio_monotone},
                        {"ratio_below_one", t.ratio_below_one}};
}

std::string concentration_csv(const std::vector<ConcentrationRow>& rows) {
  std::string out = "representative,mu,mi,xi,xi_over_lambda\n";
  for (const auto& r : rows) {
    out += std::to_string(r.representative);
    out += ',';
    out += format_double(r.mu);
    out += ',';
    out += format_double(r.mi);
    out += ',';
    out += format_double(r.xi);
    out += ',';
    out += format_double(r.xi_over_lambda);
    out += '\n';
  }
  return out;
}

nlohmann::json concentration_json(const std::vector<ConcentrationRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"representative", r.representative},
                   {"mu", r.mu},
                   {"mi", r.mi},
                   {"xi", r.xi},
                   {"xi_over_lambda", r.xi_over_lambda}});
  return out;
}

}  // namespace hyperinfo
