#pragma once

// Shared plumbing: error taxonomy, deterministic RNG, text formatting and
// content digests used by the file formats.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hullopt {

inline constexpr const char* kToolVersion = "hullopt 0.1.0";

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: shape mismatches, inverted bounds, malformed files, provenance
// mismatches. CLI exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Filesystem problems. CLI exit code 3.
struct IoError : Error {
    using Error::Error;
};

// Evaluation failures: singular regimes, degenerate hulls, non-finite
// integrands. CLI exit code 4.
struct NumericalError : Error {
    using Error::Error;
};

// Deterministic RNG. Wraps mt19937_64 but derives uniforms and normals by
// hand so streams do not depend on the standard library's distribution
// implementations (those are unspecified and vary across toolchains).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; values are produced in pairs.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, n) without stdlib distributions: rejection on the
    // top bits to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Shortest decimal representation that round-trips exactly.
inline std::string fmt_double(double v) {
    std::array<char, 40> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ValidationError("malformed floating-point value: '" + std::string(s) + "'");
    }
    return v;
}

inline long parse_long(std::string_view s) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ValidationError("malformed integer value: '" + std::string(s) + "'");
    }
    return v;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

// FNV-1a 64-bit content digest. Used for cross-stage provenance checks, not
// for security.
class Digest {
public:
    void update(std::string_view data) {
        for (unsigned char c : data) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xF];
            v >>= 4;
        }
        return out;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string digest_string(std::string_view data) {
    Digest d;
    d.update(data);
    return d.hex();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

inline std::string digest_file(const std::string& path) {
    return digest_string(read_file(path));
}

}  // namespace hullopt
