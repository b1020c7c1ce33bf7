#pragma once

#include <string>

#include "vdclab/error.hpp"
#include "vdclab/fixed_point.hpp"

namespace vdclab::checked {

template <class T>
T add(T a, T b, const char* what) {
  T r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

template <class T>
T sub(T a, T b, const char* what) {
  T r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

template <class T>
T mul(T a, T b, const char* what) {
  T r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

template <class To, class From>
To narrow(From v, const char* what) {
  const To r = static_cast<To>(v);
  if (static_cast<From>(r) != v || ((r < To{}) != (v < From{}))) {
    throw OverflowError(std::string("value does not fit target width in ") + what);
  }
  return r;
}

}  // namespace vdclab::checked
