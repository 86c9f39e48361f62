// JSON wire formats, all tagged "mc-holonomy/1". Rationals travel as
// "p/q" strings so every round trip is exact; map-backed containers keep
// the output byte-for-byte deterministic.

#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "mch/contraction.hpp"
#include "mch/holonomy.hpp"
#include "mch/linf.hpp"
#include "mch/polyform.hpp"
#include "mch/tensor.hpp"

namespace mch {

inline constexpr const char* kSchemaTag = "mc-holonomy/1";

using Json = nlohmann::json;

Json polyform_to_json(const PolyForm& f);
PolyForm polyform_from_json(const Json& j, const std::string& where = "");

Json whitney_to_json(const WhitneyElement& w);
WhitneyElement whitney_from_json(const Json& j, const std::string& where = "");

Json alg_element_to_json(const CurvedLinfPresentation& l, const AlgElement& x);
AlgElement alg_element_from_json(const CurvedLinfPresentation& l, const Json& j,
                                 const std::string& where = "");

Json algebra_to_json(const CurvedLinfPresentation& l);
CurvedLinfPresentation algebra_from_json(const Json& j);

Json morphism_to_json(const LinfMorphism& f);
LinfMorphism morphism_from_json(const Json& j);

Json form_element_to_json(const CurvedLinfPresentation& l, const FormValuedElement& x);
FormValuedElement form_element_from_json(const CurvedLinfPresentation& l, int n, const Json& j,
                                         const std::string& where = "");

Json contraction_to_json(const CurvedLinfPresentation& big, const BasedContraction& c);
BasedContraction contraction_from_json(const CurvedLinfPresentation& big, const Json& j);

Json simplex_to_json(const CurvedLinfPresentation& l, const SimplexInNerve& s);
// the algebra travels inline under "algebra" or is supplied separately
SimplexInNerve simplex_from_json(const CurvedLinfPresentation& l, const Json& j);

Json horn_to_json(const CurvedLinfPresentation& l, const MCHorn& horn);
MCHorn horn_from_json(const CurvedLinfPresentation& l, const Json& j);

Json report_to_json(const ValidationReport& rep);

// canonical serialization: sorted keys, two-space indent, trailing newline
std::string dump_canonical(const Json& j);

}  // namespace mch
