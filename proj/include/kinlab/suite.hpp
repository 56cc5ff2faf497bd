#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kinlab/config.hpp"

namespace kinlab {

// One verification certificate.  status is "fail" iff violations > 0,
// "flagged" when the check aborted or an estimator raised a resolution
// flag, otherwise "pass".
struct Certificate {
    std::string check_name;
    std::string status;
    double measured_constant = 0.0;
    long long violations = 0;
    std::string config_hash;
    std::uint64_t seed = 0;
};

// The registered check names, in execution order.
const std::vector<std::string> &registered_checks();

// Runs one check; UnknownCheck for a name outside the registry.  Exceptions
// inside the check body propagate.
Certificate run_check(const std::string &name, const RunConfig &cfg);

// Runs cfg.checks (all registered when empty).  A check that throws is
// reported as flagged instead of aborting the suite.
std::vector<Certificate> run_suite(const RunConfig &cfg);

void write_certificates_jsonl(const std::vector<Certificate> &certs,
                              std::ostream &os);
// Summary table, header: check,status,constant,violations,seed
void write_certificates_csv(const std::vector<Certificate> &certs,
                            std::ostream &os);

}  // namespace kinlab
