// JSON form of OseaResult, used by `osea osea --report-json` and the Python
// bindings.

#ifndef OSEA_REPORT_H_
#define OSEA_REPORT_H_

#include <json.hpp>

#include "osea/osea.h"

namespace osea {

// Wall-clock timings are left out when `include_timings` is false so that
// node-budgeted runs produce byte-identical reports.
nlohmann::json OseaResultToJson(const OseaResult& result, const MilpInstance& instance,
                                bool include_timings = true);

// Inverse of OseaResultToJson for every field it writes. Throws InputError
// on schema violations.
OseaResult OseaResultFromJson(const nlohmann::json& report);

}  // namespace osea

#endif  // OSEA_REPORT_H_
