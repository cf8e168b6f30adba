#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cbn/trs.hpp"

namespace testing {

inline cbn::Trs load_catalog(const std::string& name) {
  std::ifstream in(std::string(CBN_CATALOG_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return cbn::parse_trs(ss.str());
}

inline cbn::Term term(const cbn::Trs& trs, const std::string& text, bool decorated = false) {
  cbn::Signature sig = trs.signature();
  if (decorated) {
    sig.add(cbn::Symbol::bullet());
    for (cbn::Symbol f : trs.signature().symbols()) sig.add(f.circled());
  }
  return cbn::parse_term(text, {}, sig, {decorated});
}

}  // namespace testing
