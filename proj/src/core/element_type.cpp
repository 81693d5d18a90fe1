#include "meshfield/core/element_type.hpp"

namespace meshfield {

std::string_view to_string(ElementType t) {
  switch (t) {
    case ElementType::UNDEF: return "UNDEF";
    case ElementType::POINT: return "POINT";
    case ElementType::LINE2: return "LINE2";
    case ElementType::LINE3: return "LINE3";
    case ElementType::TRIA3: return "TRIA3";
    case ElementType::TRIA6: return "TRIA6";
    case ElementType::QUAD4: return "QUAD4";
    case ElementType::QUAD8: return "QUAD8";
    case ElementType::QUAD9: return "QUAD9";
    case ElementType::TET4: return "TET4";
    case ElementType::TET10: return "TET10";
    case ElementType::HEXA8: return "HEXA8";
    case ElementType::HEXA20: return "HEXA20";
    case ElementType::HEXA27: return "HEXA27";
    case ElementType::PYRA5: return "PYRA5";
    case ElementType::PYRA13: return "PYRA13";
    case ElementType::PYRA14: return "PYRA14";
    case ElementType::WEDGE6: return "WEDGE6";
    case ElementType::WEDGE15: return "WEDGE15";
    case ElementType::WEDGE18: return "WEDGE18";
  }
  return "UNDEF";
}

std::optional<ElementType> element_type_from_code(std::int64_t code) {
  if (code < 0 || code >= static_cast<std::int64_t>(kAllElementTypes.size())) return std::nullopt;
  return static_cast<ElementType>(code);
}

}  // namespace meshfield
