#ifndef SANA_CORE_VERSION_HPP
#define SANA_CORE_VERSION_HPP

namespace sana {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sana

#endif
