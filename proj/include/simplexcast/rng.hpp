#pragma once

#include <cstdint>
#include <random>

namespace simplexcast {

// Deterministic random source. Every distribution is generated from the
// mt19937_64 stream through algorithms implemented here, so draw sequences
// are reproducible across standard-library versions. Each Rng instance is
// single-threaded by contract; concurrent units derive their own stream
// via the (seed, stream) constructor.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // U[0,1) with 53-bit resolution.
    double uniform();

    // Standard normal via the Marsaglia polar method.
    double normal();

    // Gamma(shape, 1) via Marsaglia-Tsang, with the power boost for
    // shape < 1. Requires shape > 0.
    double gamma(double shape);

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace simplexcast
