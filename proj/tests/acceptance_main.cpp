#include <cstdio>

#include "nonpv/acceptance.hpp"
#include "nonpv/simd/kernels.hpp"

int main()
{
    nonpv::AcceptanceOptions opt;
    opt.on_result = [](const nonpv::CriterionResult& r) { std::printf("%s\n", nonpv::format_result(r).c_str()); std::fflush(stdout); };
    std::printf("acceptance suite, seed %llu, kernel %s\n", static_cast<unsigned long long>(opt.seed),
                nonpv::simd::active_kernels().name);
    auto res = nonpv::run_acceptance(opt);
    int failed = 0;
    for (const auto& r : res) failed += r.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(res.size()) - failed, res.size());
    return failed == 0 ? 0 : 1;
}
