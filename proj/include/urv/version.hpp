#ifndef URV_VERSION_HPP
#define URV_VERSION_HPP

#include <string_view>

namespace urv {

inline constexpr std::string_view version = "0.1.0";

} // namespace urv

#endif // URV_VERSION_HPP
