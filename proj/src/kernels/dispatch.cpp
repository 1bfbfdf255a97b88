#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "regretfolio/error.hpp"

namespace regretfolio::kernels {

namespace {

constexpr KernelTable kScalar{"scalar", scalar::dot, scalar::matvec, scalar::quad_form,
                              scalar::axpy};

#if defined(REGRETFOLIO_HAVE_AVX2)
constexpr KernelTable kAvx2{"avx2", avx2::dot, avx2::matvec, avx2::quad_form, avx2::axpy};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() noexcept {
    if (const char* pin = std::getenv("REGRETFOLIO_SIMD"); pin && std::string_view(pin) == "scalar")
        return kScalar;
    if (const KernelTable* t = avx2_table()) return *t;
    return kScalar;
}

void check_sizes(bool ok) {
    if (!ok) throw Error(ErrorCode::DimensionMismatch, "kernel operand sizes disagree");
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(REGRETFOLIO_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size() == b.size());
    return active().dot(a, b);
}

void matvec(const Matrix& m, std::span<const double> x, std::span<double> out) {
    check_sizes(m.cols() == x.size() && m.rows() == out.size());
    active().matvec(m.data(), m.rows(), m.cols(), x, out);
}

double quad_form(const Matrix& m, std::span<const double> x) {
    check_sizes(m.square() && m.cols() == x.size());
    return active().quad_form(m.data(), m.rows(), x);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    check_sizes(x.size() == y.size());
    active().axpy(alpha, x, y);
}

}  // namespace regretfolio::kernels
