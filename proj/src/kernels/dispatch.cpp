#include <cstdlib>
#include <string_view>

#include "relaycap/kernels.hpp"

namespace relaycap::simd {

std::string_view to_string(Backend b) noexcept
{
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

const KernelTable* table_for(Backend b) noexcept
{
    switch (b) {
    case Backend::scalar:
        return &detail::scalar_table;
    case Backend::avx2:
#if defined(__x86_64__) || defined(__i386__)
        if (__builtin_cpu_supports("avx2"))
            return &detail::avx2_table;
#endif
        return nullptr;
    case Backend::neon:
#if defined(__aarch64__)
        return &detail::neon_table;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

namespace {

const KernelTable& select()
{
    if (const char* forced = std::getenv("RELAYCAP_SIMD")) {
        const std::string_view name(forced);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
            if (name == to_string(b))
                if (const auto* t = table_for(b))
                    return *t;
    }
    for (Backend b : {Backend::avx2, Backend::neon})
        if (const auto* t = table_for(b))
            return *t;
    return detail::scalar_table;
}

} // namespace

const KernelTable& active() noexcept
{
    static const KernelTable& table = select();
    return table;
}

} // namespace relaycap::simd
