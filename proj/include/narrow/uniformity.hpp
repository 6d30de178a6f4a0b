#pragma once

#include "narrow/envelope.hpp"
#include "narrow/gowers.hpp"

namespace narrow {

// ||nu - 1|| under a local norm.
NormEstimate<double> nu_uniformity_report(const EnvelopeSieve& sv, const GowersSpec& spec);

// ||nu - 1|| under an averaged norm.
NormEstimate<double> nu_uniformity_report(const EnvelopeSieve& sv, const QTuple& q, const Sampling& sampling);

}  // namespace narrow
