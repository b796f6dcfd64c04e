#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ehbc/flowright.hpp"
#include "ehbc/instance.hpp"
#include "ehbc/verify.hpp"

namespace ehbc {

enum class TimeUnit { Seconds, Hours };

double seconds_per(TimeUnit unit);

// Instance schema:
//   {"bits": [B1, B2], "harvests": [{"t": .., "E": ..}, ...],
//    "channel": {"s1": .., "s2": .., "sigma2": ..}
//             | {"W_hz": .., "N0": .., "pathloss_db": [PL1, PL2]}}
// Harvest times are read in `unit` and stored in seconds. Throws ParseError on
// schema problems and InvalidInstance/InvalidUnits on bad values.
ProblemInstance instance_from_json(const nlohmann::json& j,
                                   TimeUnit unit = TimeUnit::Seconds);
nlohmann::json instance_to_json(const ProblemInstance& instance);

// Times in seconds, power in watts (or the normalized power unit), rates in
// bits/s (rate * rate_scale).
nlohmann::json schedule_to_json(const Schedule& schedule,
                                const SolveDiagnostics* diagnostics = nullptr);
// One epoch per segment, back in normalized rates.
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const VerificationReport& report);

// Columns t_start,t_end,power_W,r1,r2,cum_b1,cum_b2; rates in bits/s and
// cumulative bits at each segment end.
void write_csv(std::ostream& out, const Schedule& schedule);

nlohmann::json read_json_file(const std::string& path);
// "-" writes to stdout.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ehbc
