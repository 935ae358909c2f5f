#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace bplab {

/// 64-byte aligned allocator so FFT plans and AVX loads see one alignment class.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n == 0) return nullptr;
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{alignment}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{alignment});
  }

  template <class U>
  struct rebind {
    using other = AlignedAllocator<U>;
  };
};

template <class T, class U>
bool operator==(const AlignedAllocator<T>&, const AlignedAllocator<U>&) noexcept { return true; }
template <class T, class U>
bool operator!=(const AlignedAllocator<T>&, const AlignedAllocator<U>&) noexcept { return false; }

using RealVector = std::vector<double, AlignedAllocator<double>>;
using ComplexVector = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

}  // namespace bplab
