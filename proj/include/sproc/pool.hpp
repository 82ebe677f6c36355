#pragma once

// Recycling allocator for the small, short-lived nodes that streams, trees
// and processors are made of.  Running a pipeline allocates and frees a dozen
// such nodes per output, usually in long bursts, which general-purpose malloc
// handles poorly.  Freed blocks go on a per-thread list for their size class
// and are handed out again; each list is capped so idle memory stays bounded.
// Blocks freed on a thread other than the allocating one simply join that
// thread's lists.

#include <cstddef>
#include <memory>
#include <new>

namespace sproc::detail {

class NodePool {
 public:
  static constexpr std::size_t kGrain = 16;
  static constexpr std::size_t kClasses = 16;  // up to 256 bytes
  static constexpr std::size_t kMaxFree = std::size_t{1} << 16;

  static void* allocate(std::size_t bytes) {
    std::size_t c = size_class(bytes);
    NodePool* p = local();
    if (c < kClasses && p && p->free_[c].head) {
      Block* b = p->free_[c].head;
      p->free_[c].head = b->next;
      --p->free_[c].count;
      return b;
    }
    return ::operator new(c < kClasses ? (c + 1) * kGrain : bytes);
  }

  static void deallocate(void* ptr, std::size_t bytes) noexcept {
    std::size_t c = size_class(bytes);
    NodePool* p = local();
    if (c < kClasses && p && p->free_[c].count < kMaxFree) {
      auto* b = static_cast<Block*>(ptr);
      b->next = p->free_[c].head;
      p->free_[c].head = b;
      ++p->free_[c].count;
      return;
    }
    ::operator delete(ptr);
  }

  ~NodePool() {
    dead() = true;
    for (auto& list : free_) {
      while (list.head) {
        Block* next = list.head->next;
        ::operator delete(list.head);
        list.head = next;
      }
    }
  }

 private:
  struct Block {
    Block* next;
  };
  struct List {
    Block* head = nullptr;
    std::size_t count = 0;
  };

  static std::size_t size_class(std::size_t bytes) noexcept { return (bytes + kGrain - 1) / kGrain - 1; }

  // Trivially destructible, so still readable after the pool itself is gone
  // during thread teardown; late frees then go straight to operator delete.
  static bool& dead() noexcept {
    thread_local bool d = false;
    return d;
  }

  static NodePool* local() noexcept {
    if (dead()) return nullptr;
    thread_local NodePool pool;
    return &pool;
  }

  List free_[kClasses];
};

template <class T>
struct PoolAllocator {
  using value_type = T;

  PoolAllocator() = default;
  template <class U>
  PoolAllocator(const PoolAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    static_assert(alignof(T) <= alignof(std::max_align_t));
    return static_cast<T*>(NodePool::allocate(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t n) noexcept { NodePool::deallocate(p, n * sizeof(T)); }

  template <class U>
  bool operator==(const PoolAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T, class... Args>
std::shared_ptr<T> make_node(Args&&... args) {
  return std::allocate_shared<T>(PoolAllocator<T>{}, std::forward<Args>(args)...);
}

}  // namespace sproc::detail
