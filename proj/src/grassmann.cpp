#include "boundedrank/grassmann.hpp"

#include <algorithm>
#include <limits>

#include "boundedrank/errors.hpp"

namespace boundedrank {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) throw BudgetExceeded("subspace count overflows 64 bits");
    return a * b;
}

std::uint64_t checked_pow(std::uint64_t q, std::size_t e) {
    std::uint64_t out = 1;
    while (e--) out = checked_mul(out, q);
    return out;
}

}  // namespace

std::uint64_t gaussian_binomial(std::size_t m, std::size_t d, int q) {
    if (d > m) return 0;
    // Sum over pivot sets keeps everything in integers: each profile
    // contributes q^(number of free entries).
    std::uint64_t total = 0;
    std::vector<std::size_t> piv(d);
    for (std::size_t i = 0; i < d; ++i) piv[i] = i;
    while (true) {
        std::size_t free = 0;
        for (std::size_t i = 0; i < d; ++i) free += (m - piv[i] - 1) - (d - 1 - i);
        std::uint64_t add = checked_pow(static_cast<std::uint64_t>(q), free);
        if (total > std::numeric_limits<std::uint64_t>::max() - add) throw BudgetExceeded("subspace count overflows 64 bits");
        total += add;
        std::size_t i = d;
        while (i > 0 && piv[i - 1] == m - d + (i - 1)) --i;
        if (i == 0) break;
        ++piv[i - 1];
        for (std::size_t k = i; k < d; ++k) piv[k] = piv[k - 1] + 1;
    }
    return total;
}

SubspaceIter::SubspaceIter(Field field, std::size_t m, std::size_t d) : field_(field), m_(m), d_(d) {
    if (d > m) throw PreconditionError("subspace dimension exceeds ambient dimension");
    std::vector<std::size_t> piv(d);
    for (std::size_t i = 0; i < d; ++i) piv[i] = i;
    const auto q = static_cast<std::uint64_t>(field.order());
    while (true) {
        Profile pr;
        pr.pivots = piv;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = piv[i] + 1; j < m; ++j)
                if (!std::binary_search(piv.begin(), piv.end(), j)) pr.free.emplace_back(i, j);
        pr.first = total_;
        pr.size = checked_pow(q, pr.free.size());
        if (total_ > std::numeric_limits<std::uint64_t>::max() - pr.size)
            throw BudgetExceeded("subspace count overflows 64 bits");
        total_ += pr.size;
        profiles_.push_back(std::move(pr));
        std::size_t i = d;
        while (i > 0 && piv[i - 1] == m - d + (i - 1)) --i;
        if (i == 0) break;
        ++piv[i - 1];
        for (std::size_t k = i; k < d; ++k) piv[k] = piv[k - 1] + 1;
    }
    set_range(0, total_);
}

void SubspaceIter::set_range(std::uint64_t begin, std::uint64_t end) {
    end_ = std::min(end, total_);
    seek(std::min(begin, end_));
}

void SubspaceIter::load_profile(std::size_t k, std::uint64_t offset) {
    profile_ = k;
    const Profile& pr = profiles_[k];
    rows_.assign(d_, Vec(m_, 0));
    for (std::size_t i = 0; i < d_; ++i) rows_[i][pr.pivots[i]] = 1;
    counter_.assign(pr.free.size(), 0);
    const auto q = static_cast<std::uint64_t>(field_.order());
    for (std::size_t k2 = pr.free.size(); k2-- > 0 && offset;) {
        counter_[k2] = static_cast<Digit>(offset % q);
        offset /= q;
        rows_[pr.free[k2].first][pr.free[k2].second] = counter_[k2];
    }
}

void SubspaceIter::seek(std::uint64_t index) {
    index_ = index;
    if (index >= total_) return;
    auto it = std::upper_bound(profiles_.begin(), profiles_.end(), index,
                               [](std::uint64_t x, const Profile& p) { return x < p.first; });
    std::size_t k = static_cast<std::size_t>(it - profiles_.begin()) - 1;
    load_profile(k, index - profiles_[k].first);
}

void SubspaceIter::next() {
    if (done()) return;
    ++index_;
    if (index_ >= end_) return;
    const Profile& pr = profiles_[profile_];
    const auto q = static_cast<Digit>(field_.order());
    for (std::size_t k = pr.free.size(); k-- > 0;) {
        auto [i, j] = pr.free[k];
        if (++counter_[k] < q) {
            rows_[i][j] = counter_[k];
            return;
        }
        counter_[k] = 0;
        rows_[i][j] = 0;
    }
    load_profile(profile_ + 1, 0);
}

VecSpace SubspaceIter::space() const { return VecSpace::from_rref(field_, m_, rows_, pivots()); }

VecSpace SubspaceIter::at(std::uint64_t index) const {
    if (index >= total_) throw PreconditionError("subspace rank out of range");
    SubspaceIter copy(*this);
    copy.end_ = total_;
    copy.seek(index);
    return copy.space();
}

}  // namespace boundedrank
