#include "bitune/error.hpp"

namespace bitune {

void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::invalid_argument, what);
}

void throw_parse(const std::string& what) { throw Error(ErrorCode::parse, what); }

void throw_io(const std::string& what) { throw Error(ErrorCode::io, what); }

}  // namespace bitune
