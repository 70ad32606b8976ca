#pragma once

#include "lipkit/app/scenario.hpp"

namespace lipkit::app::detail {

// Tolerance override from the scenario, else `fallback`.
double tolerance(const Scenario& s, const std::string& name, double fallback);

void run_norm(const Scenario& s, RunReport& r);
void run_extend(const Scenario& s, RunReport& r);
void run_freenorm(const Scenario& s, RunReport& r);
void run_bpb(const Scenario& s, RunReport& r);
void run_ucx(const Scenario& s, RunReport& r);
void run_cantor(const Scenario& s, RunReport& r);
void run_sa_density(const Scenario& s, RunReport& r);
void run_seminorm(const Scenario& s, RunReport& r);
void run_c0check(const Scenario& s, RunReport& r);

// Input keys that must be present at parse time.
std::vector<std::vector<std::string>> required_inputs(Kind k, const Json& inputs);

}  // namespace lipkit::app::detail
