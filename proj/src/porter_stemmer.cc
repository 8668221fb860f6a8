#include "chatgrade/porter_stemmer.h"

#include <algorithm>
#include <initializer_list>
#include <utility>

namespace chatgrade {
namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string word) : b_(std::move(word)) {}

  std::string run() {
    step1ab();
    if (b_.size() > 1) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_;
  }

 private:
  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, stem_end_).
  int measure() const {
    int n = 0;
    std::size_t i = 0;
    while (true) {
      if (i >= stem_end_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i >= stem_end_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i >= stem_end_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (std::size_t i = 0; i < stem_end_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_cons(std::size_t j) const {
    return j >= 1 && b_[j] == b_[j - 1] && cons(j);
  }

  // cvc at positions j-2, j-1, j where the final c is not w, x or y.
  bool cvc(std::size_t j) const {
    if (j < 2 || !cons(j) || cons(j - 1) || !cons(j - 2)) return false;
    const char ch = b_[j];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  // On a match, stem_end_ marks where the suffix starts.
  bool ends(std::string_view suffix) {
    if (suffix.size() > b_.size()) return false;
    if (b_.compare(b_.size() - suffix.size(), suffix.size(), suffix) != 0) return false;
    stem_end_ = b_.size() - suffix.size();
    return true;
  }

  void set_to(std::string_view replacement) {
    b_.replace(stem_end_, std::string::npos, replacement);
  }

  void replace_if_measured(std::string_view replacement) {
    if (measure() > 0) set_to(replacement);
  }

  void step1ab() {
    if (b_.back() == 's') {
      if (ends("sses")) {
        b_.resize(b_.size() - 2);
      } else if (ends("ies")) {
        set_to("i");
      } else if (b_.size() >= 2 && b_[b_.size() - 2] != 's') {
        b_.pop_back();
      }
    }
    if (ends("eed")) {
      if (measure() > 0) b_.pop_back();
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      b_.resize(stem_end_);
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_cons(b_.size() - 1)) {
        const char ch = b_.back();
        if (ch != 'l' && ch != 's' && ch != 'z') b_.pop_back();
      } else {
        stem_end_ = b_.size();
        if (measure() == 1 && cvc(b_.size() - 1)) b_.push_back('e');
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_.back() = 'i';
  }

  bool try_rules(std::initializer_list<std::pair<std::string_view, std::string_view>> rules) {
    for (const auto& [suffix, replacement] : rules) {
      if (ends(suffix)) {
        replace_if_measured(replacement);
        return true;
      }
    }
    return false;
  }

  void step2() {
    try_rules({{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
               {"izer", "ize"}, {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"},
               {"eli", "e"}, {"ousli", "ous"}, {"ization", "ize"}, {"ation", "ate"},
               {"ator", "ate"}, {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"},
               {"ousness", "ous"}, {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"},
               {"logi", "log"}});
  }

  void step3() {
    try_rules({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
               {"ical", "ic"}, {"ful", ""}, {"ness", ""}});
  }

  void step4() {
    static constexpr std::string_view kSuffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    // Suffixes sharing a penultimate letter are listed longest first.
    for (std::string_view suffix : kSuffixes) {
      if (!ends(suffix)) continue;
      if (suffix == "ion") {
        if (stem_end_ == 0 || (b_[stem_end_ - 1] != 's' && b_[stem_end_ - 1] != 't')) return;
      }
      if (measure() > 1) b_.resize(stem_end_);
      return;
    }
  }

  void step5() {
    stem_end_ = b_.size();
    if (b_.back() == 'e') {
      stem_end_ = b_.size() - 1;
      const int m = measure();
      if (m > 1 || (m == 1 && !cvc(b_.size() - 2))) b_.pop_back();
    }
    stem_end_ = b_.size();
    if (b_.back() == 'l' && double_cons(b_.size() - 1) && measure() > 1) b_.pop_back();
  }

  std::string b_;
  std::size_t stem_end_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  if (!std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(word);
  }
  return Stemmer(std::string(word)).run();
}

}  // namespace chatgrade
