#pragma once

#include <json.hpp>

#include "specreg/diagnostics.hpp"
#include "specreg/filters.hpp"
#include "specreg/harness.hpp"

namespace specreg::io {

// All reports serialize to nlohmann::ordered_json so emitted files have a
// fixed, documented key order (insertion order below).
using ojson = nlohmann::ordered_json;

ojson to_json(const AxiomReport& rep);
ojson to_json(const CoverReport& rep);
ojson to_json(const BoundCheckReport& rep);
ojson to_json(const ConcentrationReport& rep);
ojson to_json(const SlopeFit& fit);
ojson to_json(const RateReport& rep);
ojson to_json(const SweepReport& rep);

// Flat CSV artifacts. Column layouts are part of the output contract:
//   rates:         n,trial,error,lambda_realized
//   sweep:         lambda,lambda_realized,median,q1,q3
//   concentration: n,trial,hs_error
//   bound cells:   name,a,lambda,lambda_realized,observed,bound,ratio
std::string rate_report_csv(const RateReport& rep);
std::string sweep_report_csv(const SweepReport& rep);
std::string concentration_csv(long n, const std::vector<double>& errors);
std::string bound_cells_csv(const std::vector<BoundCheckReport>& reports);

} // namespace specreg::io
