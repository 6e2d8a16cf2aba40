#pragma once

#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "hyperinfo/boolean_function.hpp"
#include "hyperinfo/compression.hpp"
#include "hyperinfo/fourier.hpp"
#include "hyperinfo/highnoise.hpp"
#include "hyperinfo/info.hpp"
#include "hyperinfo/oq1.hpp"
#include "hyperinfo/scaling.hpp"
#include "hyperinfo/search.hpp"

namespace hyperinfo {

// Locale-independent shortest-exact or 17-significant-digit decimal text.
std::string format_double(double v);

// Truth-table files: first line "n=<int>", then 2^n characters '0'/'1' in
// point-index order ('1' means value +1). Whitespace between table
// characters is ignored on read.
BooleanFunction read_truth_table(std::istream& in);
BooleanFunction read_truth_table_file(const std::string& path);
void write_truth_table(std::ostream& out, const BooleanFunction& b);

// Writes via a temp file + rename so failures leave nothing partial behind.
void write_file_atomic(const std::string& path, const std::string& content);

// CSV "mask,coeff" and the JSON equivalent; exact-zero coefficients omitted.
std::string spectrum_csv(const FourierSpectrum& s);
nlohmann::json spectrum_json(const FourierSpectrum& s);

nlohmann::json to_json(const MIReport& r);
std::string mi_csv(const MIReport& r);  // long "key,value" rows

std::string trace_jsonl(const CompressionTrace& t);  // one {coord, L_before, L_after} per line
std::string trace_csv(const CompressionTrace& t);

std::string bound_chain_csv(const BoundChainReport& r);  // K,rho,M_K,M_K_prime,margin_vs_M1
nlohmann::json bound_chain_json(const BoundChainReport& r);

// Search reports; wall time deliberately not serialized so identical runs
// produce identical bytes.
nlohmann::json to_json(const SearchReport& r);
std::string search_summary_csv(const SearchReport& r);  // alpha,max_mi,max_sum_coord_mi,capacity,margin

using ScanRow = std::tuple<double, std::string, double>;  // lambda, quantity, value
std::string scan_csv(const std::vector<ScanRow>& rows);
nlohmann::json fit_json(const std::string& quantity, const ScalingFit& f);

std::string threshold_csv(const ThresholdTable& t);
nlohmann::json threshold_json(const ThresholdTable& t);

std::string concentration_csv(const std::vector<ConcentrationRow>& rows);
nlohmann::json concentration_json(const std::vector<ConcentrationRow>& rows);

}  // namespace hyperinfo
