// result.hpp
// Copyright (c) 2026, the mlfk authors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace mlf {

// Minimal ok-or-error sum used for judgement outcomes (no std::expected in C++20).
template <class T, class E>
class Result {
public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& operator*() const { assert(ok()); return std::get<0>(v_); }
  const T* operator->() const { assert(ok()); return &std::get<0>(v_); }
  T& operator*() { assert(ok()); return std::get<0>(v_); }

  const E& error() const { assert(!ok()); return std::get<1>(v_); }

private:
  std::variant<T, E> v_;
};

} // namespace mlf
