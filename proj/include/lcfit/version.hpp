#ifndef LCFIT_VERSION_HPP
#define LCFIT_VERSION_HPP

namespace lcfit {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
