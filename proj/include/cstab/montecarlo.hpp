#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cstab/verify.hpp"

namespace cstab {

// Splittable counter-style generator: every sampling task derives its own
// stream from (seed, tag, index), so results are reproducible bit-for-bit
// regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}
    std::uint64_t next_u64();
    double next_double();     // uniform on [0, 1)
    double next_open();      // uniform on (0, 1)
    double next_exp();       // unit exponential
    double next_normal();    // standard normal (Box-Muller, pair cached)

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

Rng derive_stream(std::uint64_t seed, const std::string& tag, std::uint64_t index);

// One reproducible sampling run.
struct SampleRun {
    std::string distribution;
    std::string normalizer;
    std::string system;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<double> samples;
};

bool has_registered_sampler(const DistributionSpec& dist);

// N independent draws of a catalog law; identical (seed, spec) inputs
// reproduce identical samples.
std::vector<double> sample_distribution(const DistributionSpec& dist, std::size_t count,
                                        std::uint64_t seed);
double sample_one(const DistributionSpec& dist, Rng& rng);

// Draws of the normalized variable, by the system's probabilistic
// representation: compound sums for discrete laws, the quantile map
// Gbar^{-1}(e^{-X}) for min systems, the power map for degenerate product
// normalizers. Additive continuous cases have no sampler and throw.
std::vector<double> sample_normalized(const DistributionSpec& dist, const NormalizerFamily& fam,
                                      int n, SystemKind system, std::size_t count,
                                      std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov distance (ties handled exactly), plus the
// one-sided distances.
struct KsDistance {
    double d = 0.0;
    double d_plus = 0.0;
    double d_minus = 0.0;
};
KsDistance ks_two_sample(std::vector<double> a, std::vector<double> b);

// 1%-level asymptotic two-sample critical value 1.628 sqrt((n+m)/(n m)).
double ks_critical_1pct(std::size_t n, std::size_t m);

struct SimulationReport {
    std::string case_note;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    int n = 0;
    KsDistance ks;
    double critical = 0.0;
    bool pass = false;
    // empirical-transform deviation from the closed form, in standard errors
    double transform_max_dev_se = 0.0;
};

// Builds count draws of X and count draws of the combined normalized system
// (sum / product / min of n normalized elements for a c.s. claim; one
// normalized element against the n-fold system for pursuit) and compares the
// two samples.
SimulationReport simulate_and_test(const StabilityClaim& claim, int n, std::size_t count,
                                   std::uint64_t seed);

// CSV export, one value per line with a header line carrying seed and spec.
void write_samples_csv(const SampleRun& run, std::ostream& os);

} // namespace cstab
