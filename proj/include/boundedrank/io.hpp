#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "boundedrank/classify.hpp"
#include "boundedrank/enumerate.hpp"

namespace boundedrank {

inline constexpr int kReportSchema = 1;

// Matrix-space files:
//
//   mspace 1
//   field 2
//   shape 3 3
//   dim 5
//
//   1 0 0
//   0 0 0
//   0 0 1
//   ...
//
// Lines starting with '#' are ignored. Throws ParseError with the line number.
MatSpace parse_mspace(std::istream& in);
MatSpace parse_mspace(const std::string& text);
MatSpace read_mspace_file(const std::string& path);

/// Canonical text: the reduced basis, one block per matrix.
std::string format_mspace(const MatSpace& v);

/// "1 0 2"
std::string digit_string(std::span<const Digit> digits);
/// One digit string per row.
nlohmann::ordered_json mat_json(const Mat& m);
nlohmann::ordered_json witness_json(const EquivalenceWitness& w);
nlohmann::ordered_json space_json(const MatSpace& v);

nlohmann::ordered_json classification_json(const MatSpace& v, std::size_t r, const ClassificationResult& res);
/// Everything but elapsed_seconds depends only on the CampaignSpec, not the worker count.
nlohmann::ordered_json campaign_json(const CampaignReport& rep);
nlohmann::ordered_json census_json(const std::vector<ClassCensus>& classes);

}  // namespace boundedrank
