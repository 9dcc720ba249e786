#pragma once

#include <string>

#include "fluctsel/bundle.hpp"
#include "fluctsel/config.hpp"

namespace fluctsel {

/// Runs the experiment named by config.experiment.tag:
///   sigma0-convergence  mutation-free run against the closed-form orbit
///   periodic-orbit      periodic solution of the full equation
///   floquet-sweep       principal eigenvalue over truncation radii
///   epsilon-limit       Hopf-Cole phase against the limit profile
///   moments             measured against predicted moments
///   example1, example2  moments, stationary state and fitness for a model
///   fitness-compare     periodic against frozen-environment fitness
/// Deterministic for a given configuration. Module errors propagate with
/// the tag prepended to the message.
ResultBundle run_experiment(const RunConfig& config);

}  // namespace fluctsel
