#include "fsb/noise.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsb {

// ---- Philox4x32-10 ----------------------------------------------------------

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3) - 1

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& ctr,
                                               const std::array<std::uint32_t, 2>& key) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}
}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    ctr = round_once(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        ctr = round_once(ctr, key);
    }
    return ctr;
}

namespace {
inline std::array<std::uint32_t, 4> cell_block(std::uint64_t seed, StreamTag tag,
                                               std::uint32_t mode, std::uint64_t step) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), mode,
        static_cast<std::uint32_t>(tag)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    return Philox4x32::block(ctr, key);
}

inline std::uint64_t join64(std::uint32_t hi, std::uint32_t lo) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
}
}  // namespace

std::array<double, 2> gaussian_pair(std::uint64_t seed, StreamTag tag, std::uint32_t mode,
                                    std::uint64_t step) {
    const auto b = cell_block(seed, tag, mode, step);
    // u1 in (0,1] so log never sees zero; u2 in [0,1).
    constexpr double scale = 1.0 / 18446744073709551616.0;  // 2^-64
    const double u1 = (join64(b[0], b[1]) + 1.0) * scale;
    const double u2 = join64(b[2], b[3]) * scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

double gaussian(std::uint64_t seed, StreamTag tag, std::uint32_t mode, std::uint64_t step) {
    return gaussian_pair(seed, tag, mode, step)[0];
}

double uniform01(std::uint64_t seed, StreamTag tag, std::uint32_t mode, std::uint64_t step) {
    const auto b = cell_block(seed, tag, mode, step);
    constexpr double scale = 1.0 / 18446744073709551616.0;
    return join64(b[0], b[1]) * scale;
}

// ---- noise spec / OU path ----------------------------------------------------

void NoiseSpec::validate() const {
    if (n_modes < 1) throw std::invalid_argument("NoiseSpec: n_modes must be >= 1");
    if (base_steps < 1 || (base_steps & (base_steps - 1)) != 0)
        throw std::invalid_argument("NoiseSpec: base_steps must be a positive power of two");
    if (!(T > 0.0)) throw std::invalid_argument("NoiseSpec: T must be positive");
}

std::pair<double, double> ou_step_moments(double lambda_alpha, double dt) {
    if (lambda_alpha < 0.0 || dt < 0.0)
        throw std::invalid_argument("ou_step_moments: negative argument");
    const double decay = std::exp(-lambda_alpha * dt);
    double sd;
    if (lambda_alpha * dt == 0.0) {
        sd = std::sqrt(dt);  // lambda -> 0 (or dt = 0) limit of the ratio
    } else {
        // (1 - e^{-2 lambda dt}) / (2 lambda) via expm1: stable for tiny and
        // huge exponents alike.
        sd = std::sqrt(-std::expm1(-2.0 * lambda_alpha * dt) / (2.0 * lambda_alpha));
    }
    return {decay, sd};
}

namespace {
void check_steps(const NoiseSpec& spec, int n_steps) {
    spec.validate();
    if (n_steps < 1) throw std::invalid_argument("noise: n_steps must be >= 1");
    if (n_steps > spec.base_steps)
        throw std::invalid_argument("noise: n_steps exceeds base_steps (" +
                                    std::to_string(n_steps) + " > " +
                                    std::to_string(spec.base_steps) + ")");
    if (spec.base_steps % n_steps != 0)
        throw std::invalid_argument("noise: n_steps must divide base_steps (" +
                                    std::to_string(n_steps) + " does not divide " +
                                    std::to_string(spec.base_steps) + ")");
}
}  // namespace

OUPath generate_ou_path(const NoiseSpec& spec, const FracParams& p, int n_steps) {
    check_steps(spec, n_steps);
    const int stride = spec.base_steps / n_steps;
    const double dt_fine = spec.T / spec.base_steps;

    OUPath path;
    path.T = spec.T;
    path.alpha = p.alpha;
    path.seed = spec.seed;
    path.w = Eigen::MatrixXd::Zero(n_steps + 1, spec.n_modes);

    for (int k = 1; k <= spec.n_modes; ++k) {
        const double lambda = std::pow(k * std::numbers::pi, p.alpha);
        const auto [decay, sd] = ou_step_moments(lambda, dt_fine);
        double w = 0.0;
        for (int i = 1; i <= spec.base_steps; ++i) {
            w = decay * w + sd * gaussian(spec.seed, StreamTag::ou_forcing, k, i);
            if (i % stride == 0) path.w(i / stride, k - 1) = w;
        }
    }
    return path;
}

Eigen::MatrixXd wiener_increments(const NoiseSpec& spec, int n_steps) {
    check_steps(spec, n_steps);
    const int stride = spec.base_steps / n_steps;
    const double root_dt = std::sqrt(spec.T / spec.base_steps);

    Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(n_steps, spec.n_modes);
    for (int k = 1; k <= spec.n_modes; ++k) {
        for (int m = 0; m < n_steps; ++m) {
            double acc = 0.0;  // fine increments summed in fine order
            for (int i = m * stride + 1; i <= (m + 1) * stride; ++i)
                acc += root_dt * gaussian(spec.seed, StreamTag::wiener, k, i);
            inc(m, k - 1) = acc;
        }
    }
    return inc;
}

// ---- metadata hash / binary dump ---------------------------------------------

namespace {
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}
}  // namespace

std::uint64_t noise_metadata_hash(const NoiseSpec& spec) {
    std::uint64_t h = 14695981039346656037ULL;
    h = fnv1a(&spec.seed, sizeof spec.seed, h);
    const std::int64_t modes = spec.n_modes, steps = spec.base_steps;
    h = fnv1a(&modes, sizeof modes, h);
    h = fnv1a(&steps, sizeof steps, h);
    h = fnv1a(&spec.T, sizeof spec.T, h);
    const char* id = rng_id();
    h = fnv1a(id, std::strlen(id), h);
    return h;
}

namespace {
template <typename T>
void put64(std::ostream& os, T v) {
    static_assert(sizeof(T) == 8);
    unsigned char buf[8];
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

template <typename T>
T get64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("path dump: truncated header/payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    T v;
    std::memcpy(&v, &bits, 8);
    return v;
}
}  // namespace

void write_path_dump(std::ostream& os, const OUPath& path) {
    put64(os, path.seed);
    put64(os, static_cast<std::uint64_t>(path.n_modes()));
    put64(os, static_cast<std::uint64_t>(path.n_steps()));
    put64(os, path.T);
    put64(os, path.alpha);
    for (int m = 0; m < path.w.rows(); ++m)
        for (int k = 0; k < path.w.cols(); ++k) put64(os, path.w(m, k));
}

OUPath read_path_dump(std::istream& is) {
    OUPath path;
    path.seed = get64<std::uint64_t>(is);
    const auto n = static_cast<int>(get64<std::uint64_t>(is));
    const auto m = static_cast<int>(get64<std::uint64_t>(is));
    path.T = get64<double>(is);
    path.alpha = get64<double>(is);
    if (n < 1 || m < 0) throw std::runtime_error("path dump: corrupt header");
    path.w.resize(m + 1, n);
    for (int r = 0; r <= m; ++r)
        for (int c = 0; c < n; ++c) path.w(r, c) = get64<double>(is);
    return path;
}

}  // namespace fsb
