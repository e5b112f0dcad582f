#include "rlci/wavelet.hpp"

#include <algorithm>
#include <numeric>

namespace rlci {

void bitvector::build_rank() {
    ranks_.assign(words_.size() + 1, 0);
    for (std::size_t w = 0; w < words_.size(); ++w)
        ranks_[w + 1] = ranks_[w] + static_cast<std::uint32_t>(std::popcount(words_[w]));
}

wavelet_matrix::wavelet_matrix(const std::vector<std::uint32_t>& values,
                               const std::vector<std::uint64_t>& weights)
    : n_(values.size()) {
    std::uint32_t hi = 0;
    for (auto v : values) hi = std::max(hi, v);
    bits_ = std::max(1u, static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(hi) + 1)));
    std::vector<std::uint32_t> order(n_);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<std::uint32_t> zeros, ones;
    for (unsigned l = 0; l < bits_; ++l) {
        const unsigned shift = bits_ - 1 - l;
        bitvector bv(n_);
        zeros.clear();
        ones.clear();
        for (std::size_t i = 0; i < n_; ++i) {
            if ((values[order[i]] >> shift) & 1) {
                bv.set(i);
                ones.push_back(order[i]);
            } else {
                zeros.push_back(order[i]);
            }
        }
        bv.build_rank();
        levels_.push_back(std::move(bv));
        zeros_.push_back(zeros.size());
        std::copy(zeros.begin(), zeros.end(), order.begin());
        std::copy(ones.begin(), ones.end(), order.begin() + static_cast<std::ptrdiff_t>(zeros.size()));
        std::vector<std::uint64_t> ws(n_ + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) ws[i + 1] = ws[i] + (weights.empty() ? 1 : weights[order[i]]);
        wsum_.push_back(std::move(ws));
    }
    perm_ = std::move(order);
}

std::uint64_t wavelet_matrix::sum_less(std::size_t a, std::size_t b, std::uint64_t y) const {
    if (y >= (std::uint64_t{1} << bits_)) return wsum_.back()[b] - wsum_.back()[a];
    std::uint64_t s = 0;
    for (unsigned l = 0; l < bits_ && a < b; ++l) {
        const bitvector& bv = levels_[l];
        const std::size_t r0a = bv.rank0(a), r0b = bv.rank0(b);
        if ((y >> (bits_ - 1 - l)) & 1) {
            s += wsum_[l][r0b] - wsum_[l][r0a];
            a = zeros_[l] + (a - r0a);
            b = zeros_[l] + (b - r0b);
        } else {
            a = r0a;
            b = r0b;
        }
    }
    return s;
}

std::uint64_t wavelet_matrix::sum(std::size_t a, std::size_t b, std::uint32_t y1, std::uint32_t y2) const {
    if (a >= b || y1 > y2 || n_ == 0) return 0;
    return sum_less(a, b, static_cast<std::uint64_t>(y2) + 1) - sum_less(a, b, y1);
}

}  // namespace rlci
