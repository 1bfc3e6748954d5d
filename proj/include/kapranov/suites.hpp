#ifndef KAPRANOV_SUITES_HPP
#define KAPRANOV_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <kapranov/dolbeault.hpp>

namespace kapranov
{

// Parameters shared by all verification suites. The metric must be known to
// model_metric_order(base_order, fiber_cap).
struct SuiteParams {
    ChartMetric metric;
    bool flat_metric = false;
    int base_order = 4;
    int fiber_cap = 4;
    int n_max = 4;
    std::uint64_t seed = 0;

    int dim() const
    {
        return metric.dim();
    }
};

const std::vector<std::string> &suite_names();

// Certificates of one suite, in a fixed order. Exceptions raised by the
// underlying checks become failing certificates.
std::vector<Certificate> run_suite(const std::string &name, const SuiteParams &params);

// Runs the named suites concurrently (at most KAPRANOV_THREADS at a time) and
// returns all certificates sorted by suite, then identity.
std::vector<Certificate> run_suites(const std::vector<std::string> &names, const SuiteParams &params);

} // namespace kapranov

#endif
