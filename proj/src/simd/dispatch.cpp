#include <cstdlib>
#include <cstring>

#include "nonpv/simd/kernels.hpp"

namespace nonpv::simd {

#if NONPV_HAVE_AVX2_TU
const Kernels& avx2_table();
#endif

const Kernels* avx2_kernels()
{
#if NONPV_HAVE_AVX2_TU
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const Kernels& active_kernels()
{
    static const Kernels* k = [] {
        const char* env = std::getenv("NONPV_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        const Kernels* v = avx2_kernels();
        return v ? v : &scalar_kernels();
    }();
    return *k;
}

std::vector<std::string> available_kernels()
{
    std::vector<std::string> r{scalar_kernels().name};
    if (avx2_kernels()) r.emplace_back(avx2_kernels()->name);
    return r;
}

}  // namespace nonpv::simd
