// Kahan's matrix: CPQR leaves it unpermuted and misses the small singular
// value, QLP and PowerURV do not.

#include <cmath>
#include <cstdio>

#include <urv/urv.hpp>

int main()
{
    const urv::Index n = 96;
    const urv::Matrix a = urv::gen_kahan(n, 1.2);
    const double smin = urv::singular_values(a).back();

    const urv::UrvFactorization cp = urv::cpqr_urv(a);
    const urv::UrvFactorization ql = urv::qlp(a);
    const urv::UrvFactorization pu = urv::power_urv(a, 1, true, {42, 1});

    std::printf("sigma_min(A)         %.6e\n", smin);
    std::printf("cpqr     |R(n,n)|    %.6e  ratio %.3e\n", std::abs(cp.r(n - 1, n - 1)), std::abs(cp.r(n - 1, n - 1)) / smin);
    std::printf("qlp      |R(n,n)|    %.6e  ratio %.3e\n", std::abs(ql.r(n - 1, n - 1)), std::abs(ql.r(n - 1, n - 1)) / smin);
    std::printf("powerurv |R(n,n)|    %.6e  ratio %.3e\n", std::abs(pu.r(n - 1, n - 1)), std::abs(pu.r(n - 1, n - 1)) / smin);

    // rank-k errors on the slow-decay benchmark matrix
    const urv::GeneratedMatrix slow = urv::gen_slow_decay(200, 160, {7, 0});
    for (int q : {0, 1}) {
        const urv::ErrorProfile e = urv::error_profile(slow.a, urv::power_urv(slow.a, q, true, {7, 1}), *slow.true_sigma);
        std::printf("powerurv q=%d  k=10: %.4e (sigma_11 %.4e)  k=40: %.4e (sigma_41 %.4e)\n", q, e.abs_spectral[10],
                    e.sigma_ref[10], e.abs_spectral[40], e.sigma_ref[40]);
    }
    return 0;
}
