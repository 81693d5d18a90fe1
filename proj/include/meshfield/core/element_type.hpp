#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace meshfield {

/// Finite element types. Enumerator values are the integer codes stored in
/// `/Mesh/Elements/Types`.
enum class ElementType : std::int32_t {
  UNDEF = 0,
  POINT = 1,
  LINE2 = 2,
  LINE3 = 3,
  TRIA3 = 4,
  TRIA6 = 5,
  QUAD4 = 6,
  QUAD8 = 7,
  QUAD9 = 8,
  TET4 = 9,
  TET10 = 10,
  HEXA8 = 11,
  HEXA20 = 12,
  HEXA27 = 13,
  PYRA5 = 14,
  PYRA13 = 15,
  PYRA14 = 16,
  WEDGE6 = 17,
  WEDGE15 = 18,
  WEDGE18 = 19,
};

inline constexpr std::array<ElementType, 20> kAllElementTypes = {
    ElementType::UNDEF,  ElementType::POINT,   ElementType::LINE2,   ElementType::LINE3,
    ElementType::TRIA3,  ElementType::TRIA6,   ElementType::QUAD4,   ElementType::QUAD8,
    ElementType::QUAD9,  ElementType::TET4,    ElementType::TET10,   ElementType::HEXA8,
    ElementType::HEXA20, ElementType::HEXA27,  ElementType::PYRA5,   ElementType::PYRA13,
    ElementType::PYRA14, ElementType::WEDGE6,  ElementType::WEDGE15, ElementType::WEDGE18,
};

constexpr int node_count(ElementType t) {
  switch (t) {
    case ElementType::UNDEF: return 0;
    case ElementType::POINT: return 1;
    case ElementType::LINE2: return 2;
    case ElementType::LINE3: return 3;
    case ElementType::TRIA3: return 3;
    case ElementType::TRIA6: return 6;
    case ElementType::QUAD4: return 4;
    case ElementType::QUAD8: return 8;
    case ElementType::QUAD9: return 9;
    case ElementType::TET4: return 4;
    case ElementType::TET10: return 10;
    case ElementType::HEXA8: return 8;
    case ElementType::HEXA20: return 20;
    case ElementType::HEXA27: return 27;
    case ElementType::PYRA5: return 5;
    case ElementType::PYRA13: return 13;
    case ElementType::PYRA14: return 14;
    case ElementType::WEDGE6: return 6;
    case ElementType::WEDGE15: return 15;
    case ElementType::WEDGE18: return 18;
  }
  return 0;
}

constexpr int dimension(ElementType t) {
  switch (t) {
    case ElementType::UNDEF:
    case ElementType::POINT: return 0;
    case ElementType::LINE2:
    case ElementType::LINE3: return 1;
    case ElementType::TRIA3:
    case ElementType::TRIA6:
    case ElementType::QUAD4:
    case ElementType::QUAD8:
    case ElementType::QUAD9: return 2;
    default: return 3;
  }
}

/// Number of corner (vertex) nodes; higher-order nodes follow the corners in
/// the connectivity row.
constexpr int corner_count(ElementType t) {
  switch (t) {
    case ElementType::LINE3: return 2;
    case ElementType::TRIA6: return 3;
    case ElementType::QUAD8:
    case ElementType::QUAD9: return 4;
    case ElementType::TET10: return 4;
    case ElementType::HEXA20:
    case ElementType::HEXA27: return 8;
    case ElementType::PYRA13:
    case ElementType::PYRA14: return 5;
    case ElementType::WEDGE15:
    case ElementType::WEDGE18: return 6;
    default: return node_count(t);
  }
}

std::string_view to_string(ElementType t);

/// Maps a stored integer code back to the enum; nullopt for unknown codes.
std::optional<ElementType> element_type_from_code(std::int64_t code);

}  // namespace meshfield
