// Compatible families of forms on the boundary or a horn of the n-simplex,
// and the extension section sigma with sigma_* restricted back = identity.

#pragma once

#include <optional>
#include <vector>

#include "mch/polyform.hpp"

namespace mch {

enum class FamilyShape { Boundary, Horn };

// One PolyForm per nondegenerate top face of the shape. Face j of the
// n-simplex is the (n-1)-simplex on the vertex set {0..n} \ {j}, with the
// order-preserving identification.
class FormFamily {
public:
    FormFamily(FamilyShape shape, int n, int horn_index = -1);

    static FormFamily boundary(int n) { return FormFamily(FamilyShape::Boundary, n); }
    static FormFamily horn(int n, int i) { return FormFamily(FamilyShape::Horn, n, i); }

    FamilyShape shape() const { return shape_; }
    int simplex_dim() const { return n_; }
    int horn_index() const { return horn_; }
    bool has_face(int j) const;
    // the faces carried by the shape, in increasing order
    std::vector<int> face_indices() const;

    void set_face(int j, PolyForm f);
    const PolyForm& face(int j) const;

    // restriction of a global form to the shape
    static FormFamily restrict_to_shape(FamilyShape shape, const PolyForm& a, int horn_index = -1);

    // members agree on shared subfaces
    bool is_compatible() const;

private:
    FamilyShape shape_;
    int n_;
    int horn_;
    std::vector<std::optional<PolyForm>> members_;
};

// The section sigma of the restriction map: extends a compatible family on
// the boundary or a horn to a form on the whole simplex whose restriction
// to every face of the shape reproduces the family. Horn input fills the
// missing face first by applying sigma to its boundary. Linear in the
// family; throws InputError on incompatible input.
PolyForm extend_section(const FormFamily& y);

}  // namespace mch
