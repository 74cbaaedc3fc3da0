#pragma once

#include <string>

namespace presim {

// Media types and operating systems are fixed small enums; everything else
// (formats, applications) is data-driven.
inline constexpr int kMediaTypes = 4;
inline constexpr int kOsCount = 3;

enum class MediaType : int { audio = 0, image = 1, text = 2, video = 3 };

inline const char* media_name(int t) {
  static const char* names[kMediaTypes] = {"audio", "image", "text", "video"};
  return names[t];
}

inline int media_index(const std::string& name) {
  for (int t = 0; t < kMediaTypes; ++t)
    if (name == media_name(t)) return t;
  return -1;
}

inline const char* os_name(int os) {
  static const char* names[kOsCount] = {"windows", "apple", "linux"};
  return names[os];
}

enum class InstitutionKind : int {
  broadcaster = 0,
  government = 1,
  library = 2,
  university = 3,
  personal = 4,
};
inline constexpr int kKindCount = 5;

inline const char* kind_name(InstitutionKind k) {
  static const char* names[kKindCount] = {"broadcaster", "government", "library",
                                          "university", "personal"};
  return names[static_cast<int>(k)];
}

// Personal archives are private; every other kind is a public institution.
inline bool is_public(InstitutionKind k) { return k != InstitutionKind::personal; }

// Largest plausible staff per public kind; staff is drawn in [1, staff_max].
inline int staff_max(InstitutionKind k) {
  switch (k) {
    case InstitutionKind::broadcaster: return 50;
    case InstitutionKind::government: return 100;
    case InstitutionKind::library: return 80;
    case InstitutionKind::university: return 60;
    case InstitutionKind::personal: return 0;
  }
  return 0;
}

}  // namespace presim
