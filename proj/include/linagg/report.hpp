#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "linagg/bounds.hpp"
#include "linagg/experiments.hpp"

namespace linagg {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Per-replicate records, one line each, doubles printed with %.17g.
std::string records_csv(const ExperimentReport& report);
std::string beta0_csv(const Beta0ScalingReport& report);

Json to_json(const OracleReport& o);
Json to_json(const ErmFit& f);
Json to_json(const SmallBallEstimate& e);
Json to_json(const GridSummary& s);
Json to_json(const ExperimentReport& r);
Json to_json(const RateSweepReport& r);
Json to_json(const Beta0ScalingReport& r);
Json to_json(const OpnormScalingReport& r);
Json to_json(const TailCoverageReport& r);
Json to_json(const LinearFit& f);
Json to_json(const TheoremABound& b);
Json to_json(const Interval& i);
Json to_json(const LambdaClassBound& b);
Json to_json(const TailRadii& r);
Json to_json(const RioBound& r);

/// Metadata block: schema version, UTC timestamp, seeds.
Json metadata(std::uint64_t master_seed);

/// Writes text to path; throws std::runtime_error naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

/// {prefix}{campaign}-{seed}.csv and .json
std::filesystem::path report_path(const std::string& prefix, const std::string& campaign,
                                  std::uint64_t seed, const std::string& extension);

}  // namespace linagg
