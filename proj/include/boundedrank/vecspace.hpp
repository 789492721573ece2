#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "boundedrank/mat.hpp"

namespace boundedrank {

/// A subspace of GF(p)^m kept as the nonzero rows of a reduced row echelon
/// form. The stored basis is canonical: two VecSpaces are equal iff their
/// bases are identical.
class VecSpace {
public:
    VecSpace(Field field, std::size_t ambient);

    static VecSpace span(Field field, std::size_t ambient, const std::vector<Vec>& vectors);
    static VecSpace full(Field field, std::size_t ambient);
    /// Adopts a basis that is already in reduced echelon form. Not checked.
    static VecSpace from_rref(Field field, std::size_t ambient, std::vector<Vec> basis,
                              std::vector<std::size_t> pivots);

    const Field& field() const noexcept { return field_; }
    std::size_t ambient() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    std::size_t codim() const noexcept { return ambient_ - basis_.size(); }
    bool is_zero() const noexcept { return basis_.empty(); }

    const std::vector<Vec>& basis() const noexcept { return basis_; }
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

    /// Remainder of v after elimination against the basis; zero iff v is in the space.
    Vec reduce(std::span<const Digit> v) const;
    bool contains(std::span<const Digit> v) const;
    /// Coordinates of a member in the stored basis (the entries at pivot positions).
    Vec coordinates(std::span<const Digit> v) const;
    /// The member with the given coordinates.
    Vec combine(std::span<const Digit> coeffs) const;

    /// Orthogonal complement for the standard dot product.
    VecSpace orthogonal() const;

    /// Concatenated basis digits; a total order on spaces of equal dimension.
    std::string key() const;

    friend bool operator==(const VecSpace& a, const VecSpace& b) noexcept {
        return a.field_ == b.field_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    Field field_;
    std::size_t ambient_;
    std::vector<Vec> basis_;
    std::vector<std::size_t> pivots_;
};

VecSpace sum(const VecSpace& a, const VecSpace& b);
VecSpace intersect(const VecSpace& a, const VecSpace& b);
bool is_subspace(const VecSpace& small, const VecSpace& big);

/// Canonical unit vector e_i of GF(p)^m (0-based).
Vec unit_vector(std::size_t m, std::size_t i);

}  // namespace boundedrank
