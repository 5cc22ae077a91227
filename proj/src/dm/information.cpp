#include "relaycap/dm/information.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaycap::dm {

JointPmf marginal(const JointPmf& joint, const Axes& axes)
{
    const auto& dims = joint.dims();
    std::vector<std::size_t> out_dims;
    std::vector<bool> seen(dims.size(), false);
    for (auto a : axes) {
        if (a >= dims.size())
            throw std::invalid_argument("axis " + std::to_string(a) + " does not exist");
        if (seen[a])
            throw std::invalid_argument("axis " + std::to_string(a) + " listed twice");
        seen[a] = true;
        out_dims.push_back(dims[a]);
    }
    JointPmf out(out_dims);

    // Stride in the output for every input axis (0 if summed out).
    std::vector<std::size_t> stride(dims.size(), 0);
    {
        std::size_t s = 1;
        for (std::size_t k = axes.size(); k-- > 0;) {
            stride[axes[k]] = s;
            s *= out_dims[k];
        }
    }

    const auto src = joint.data();
    auto dst = out.data();
    std::vector<std::size_t> index(dims.size(), 0);
    std::size_t target = 0;
    for (std::size_t f = 0; f < src.size(); ++f) {
        dst[target] += src[f];
        // Odometer increment, last axis fastest.
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (++index[k] < dims[k]) {
                target += stride[k];
                break;
            }
            target -= stride[k] * (dims[k] - 1);
            index[k] = 0;
        }
    }
    return out;
}

double entropy(const JointPmf& joint, const Axes& axes)
{
    const auto m = marginal(joint, axes);
    double h = 0.0;
    for (double p : m.data())
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

double mutual_information(const JointPmf& joint, const Axes& a, const Axes& b, const Axes& given)
{
    Axes order;
    order.insert(order.end(), a.begin(), a.end());
    order.insert(order.end(), b.begin(), b.end());
    order.insert(order.end(), given.begin(), given.end());
    const auto abc = marginal(joint, order);  // rejects overlap and bad axes

    const auto& d = abc.dims();
    std::size_t na = 1, nb = 1, nc = 1;
    for (std::size_t k = 0; k < a.size(); ++k)
        na *= d[k];
    for (std::size_t k = 0; k < b.size(); ++k)
        nb *= d[a.size() + k];
    for (std::size_t k = 0; k < given.size(); ++k)
        nc *= d[a.size() + b.size() + k];

    const auto p = abc.data();
    std::vector<double> pac(na * nc, 0.0), pbc(nb * nc, 0.0), pc(nc, 0.0);
    for (std::size_t ia = 0; ia < na; ++ia)
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t ic = 0; ic < nc; ++ic) {
                const double v = p[(ia * nb + ib) * nc + ic];
                pac[ia * nc + ic] += v;
                pbc[ib * nc + ic] += v;
                pc[ic] += v;
            }

    double info = 0.0;
    for (std::size_t ia = 0; ia < na; ++ia)
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t ic = 0; ic < nc; ++ic) {
                const double v = p[(ia * nb + ib) * nc + ic];
                if (v <= 0.0)
                    continue;
                info += v * std::log2(v * pc[ic] / (pac[ia * nc + ic] * pbc[ib * nc + ic]));
            }
    return info;
}

} // namespace relaycap::dm
