#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace looplab {

// 50 significant digits, used by oracles and --precision high
using high_real = boost::multiprecision::cpp_bin_float_50;

template <class T> using cplx = std::complex<T>;

template <class T> inline T pi() { return boost::math::constants::pi<T>(); }

template <class T> inline double to_double(const T& x) { return static_cast<double>(x); }

template <class T> inline cplx<T> cis(const T& x) {
    using std::cos;
    using std::sin;
    return {cos(x), sin(x)};
}

template <class T> inline T cabs(const cplx<T>& z) {
    using std::sqrt;
    return sqrt(z.real() * z.real() + z.imag() * z.imag());
}

template <class T> inline T rabs(const T& x) { return x < T(0) ? T(-x) : x; }

// errors
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct singular_input_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct embedding_invalid_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct malformed_configuration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct degenerate_parameters_error : std::domain_error {
    std::string factor;
    degenerate_parameters_error(const std::string& f, const std::string& what)
        : std::domain_error(what), factor(f) {}
};

/// Neumaier summation. Real and imaginary parts are compensated separately.
template <class T> class compensated_sum {
public:
    void add(const cplx<T>& z) {
        step(re_, cre_, z.real());
        step(im_, cim_, z.imag());
    }
    compensated_sum& operator+=(const cplx<T>& z) {
        add(z);
        return *this;
    }
    void merge(const compensated_sum& o) {
        add({o.re_, o.im_});
        add({o.cre_, o.cim_});
    }
    cplx<T> value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void step(T& s, T& c, const T& x) {
        T t = s + x;
        if (rabs(s) >= rabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T re_{0}, cre_{0}, im_{0}, cim_{0};
};

// splitmix64; used where the draw sequence must not depend on the standard library
class splitmix64 {
public:
    explicit splitmix64(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t s_;
};

} // namespace looplab
