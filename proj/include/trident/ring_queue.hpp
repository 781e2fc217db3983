#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace trident {

// Growable FIFO ring buffer. Allocates nothing until the first push, which
// matters for the N^2*m crosspoint buffers of a large fabric.
template <typename T>
class RingQueue {
public:
    bool empty() const { return size_ == 0; }
    std::size_t size() const { return size_; }

    const T& front() const
    {
        assert(size_ > 0);
        return buf_[head_];
    }

    // i-th element from the head.
    const T& operator[](std::size_t i) const
    {
        assert(i < size_);
        return buf_[(head_ + i) & (buf_.size() - 1)];
    }

    void push(const T& value)
    {
        if (size_ == buf_.size())
            grow();
        buf_[(head_ + size_) & (buf_.size() - 1)] = value;
        ++size_;
    }

    T pop()
    {
        assert(size_ > 0);
        T value = buf_[head_];
        head_ = (head_ + 1) & (buf_.size() - 1);
        --size_;
        return value;
    }

private:
    void grow()
    {
        std::vector<T> next(buf_.empty() ? 4 : buf_.size() * 2);
        for (std::size_t i = 0; i < size_; ++i)
            next[i] = (*this)[i];
        buf_.swap(next);
        head_ = 0;
    }

    std::vector<T> buf_;
    std::uint32_t head_ = 0;
    std::uint32_t size_ = 0;
};

} // namespace trident
