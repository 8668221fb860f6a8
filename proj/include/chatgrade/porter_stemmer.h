#pragma once

#include <string>
#include <string_view>

namespace chatgrade {

// Porter (1980) suffix-stripping stemmer for English. Words that are not
// entirely lowercase ASCII letters, or that are shorter than three letters,
// are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace chatgrade
