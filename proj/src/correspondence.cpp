#include "shifteq/correspondence.hpp"

#include <cstddef>
#include <vector>

#include "shifteq/errors.hpp"

namespace shifteq {

namespace {

std::vector<Card> unit_dims(std::size_t n) { return std::vector<Card>(n, Card(1)); }

}  // namespace

void require_descriptor(const CorrDescriptor& x) {
    if (x.left_dims.size() != x.mult.n_rows() ||
        x.right_dims.size() != x.mult.n_cols())
        throw InvariantViolation(
            "descriptor dimension lists do not match the multiplicity matrix");
    for (const Card& d : x.left_dims)
        if (d.is_zero())
            throw InvariantViolation("descriptor dimensions must be positive");
    for (const Card& d : x.right_dims)
        if (d.is_zero())
            throw InvariantViolation("descriptor dimensions must be positive");
}

CorrDescriptor descriptor_from_matrix(const CardMatrix& a) {
    return CorrDescriptor{unit_dims(a.n_rows()), unit_dims(a.n_cols()), a};
}

CorrDescriptor descriptor_from_matrix(const NatMatrix& a) {
    return descriptor_from_matrix(to_card(a));
}

CorrDescriptor tensor_descriptor(const CorrDescriptor& x, const CorrDescriptor& y) {
    require_descriptor(x);
    require_descriptor(y);
    if (!(x.mult.cols() == y.mult.rows()) || x.right_dims != y.left_dims)
        throw IncompatibleIndexSets(
            "tensor product needs the left factor's right algebra to equal the "
            "right factor's left algebra");
    return CorrDescriptor{x.left_dims, y.right_dims, card_mul(x.mult, y.mult)};
}

bool descriptors_isomorphic(const CorrDescriptor& x, const CorrDescriptor& y) {
    require_descriptor(x);
    require_descriptor(y);
    if (!(x.mult.rows() == y.mult.rows()) || !(x.mult.cols() == y.mult.cols()) ||
        x.left_dims != y.left_dims || x.right_dims != y.right_dims)
        throw IncompatibleIndexSets(
            "descriptors over different algebras cannot be compared");
    return x.mult == y.mult;
}

DescriptorTraits descriptor_predicates(const CorrDescriptor& x) {
    require_descriptor(x);
    DescriptorTraits t;
    t.injective = true;
    t.full = true;
    t.proper = true;
    for (std::size_t v = 0; v < x.mult.n_rows(); ++v) {
        bool all_zero = true;
        for (std::size_t w = 0; w < x.mult.n_cols(); ++w) {
            const Card& c = x.mult.at(v, w);
            if (!c.is_zero()) all_zero = false;
            if (c.is_omega()) t.proper = false;
        }
        if (all_zero) t.injective = false;
    }
    for (std::size_t w = 0; w < x.mult.n_cols(); ++w) {
        bool all_zero = true;
        for (std::size_t v = 0; v < x.mult.n_rows(); ++v)
            if (!x.mult.at(v, w).is_zero()) all_zero = false;
        if (all_zero) t.full = false;
    }
    t.regular = t.injective && t.proper;
    t.essential_underlying = is_essential(x.mult);
    return t;
}

}  // namespace shifteq
