#include "narrow/uniformity.hpp"

namespace narrow {

namespace {

CyclicFnd minus_one(const EnvelopeSieve& sv) {
  CyclicFnd g = sv.values;
  g.values() -= 1.0;
  return g;
}

}  // namespace

NormEstimate<double> nu_uniformity_report(const EnvelopeSieve& sv, const GowersSpec& spec) {
  return local_gowers(minus_one(sv), spec);
}

NormEstimate<double> nu_uniformity_report(const EnvelopeSieve& sv, const QTuple& q, const Sampling& sampling) {
  return averaged_gowers(minus_one(sv), q, sampling);
}

}  // namespace narrow
