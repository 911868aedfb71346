#ifndef PICSIM_VERSION_HPP
#define PICSIM_VERSION_HPP

namespace picsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace picsim

#endif
