#pragma once

#include <complex>

#include <json.hpp>

#include "cml/arcs.hpp"
#include "cml/counting.hpp"
#include "cml/densities.hpp"
#include "cml/geometry.hpp"
#include "cml/quadrature.hpp"

namespace cml {

using json = nlohmann::json;

json to_json(std::complex<double> z);
json to_json(const Rational& q);
json to_json(const BigInt& v);
json to_json(const ResidueCountVector& r);
json to_json(const DensityReport& r);
json to_json(const LocalResult& r);
json to_json(const ComplexEstimate& e);
json to_json(const JEstimate& e);
json to_json(const MuInfinity& m);
json to_json(const ArcContext& c);
json to_json(const ArcLocation& l);
json to_json(const MeasureBound& m);
json to_json(const WeylChain& w);
json to_json(const ScanReport& s);
json to_json(const CompleteSumReport& r);
json to_json(const DimEstimate& d);
json to_json(const HalvingReport& r);
json to_json(const RestrictionReport& r);
json to_json(const SqrtThreshold& t);
json to_json(const CountReport& r);
json to_json(const InequalityReport& r);

}  // namespace cml
