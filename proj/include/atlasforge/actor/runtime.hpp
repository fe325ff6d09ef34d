#pragma once

// In-process actor runtime: a fixed worker pool multiplexing actors, each with an
// unbounded FIFO mailbox. An actor's handler never runs concurrently with itself.
//
// Delivery is exactly-once for live targets and FIFO per sender/receiver pair. Messages
// sent to a terminated actor are dropped and counted.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace atlasforge::actor {

namespace detail {
struct CellBase {
    explicit CellBase(std::uint64_t id) : id(id) {}
    virtual ~CellBase() = default;
    const std::uint64_t id;
};
}  // namespace detail

/// Opaque address of an actor. Copyable; usable only through ActorSystem::send / Context::send.
class ActorRef {
public:
    ActorRef() = default;

    std::uint64_t id() const noexcept { return cell_ ? cell_->id : 0; }
    explicit operator bool() const noexcept { return cell_ != nullptr; }
    friend bool operator==(const ActorRef& a, const ActorRef& b) noexcept { return a.cell_ == b.cell_; }

private:
    template <class Msg>
    friend class ActorSystem;
    explicit ActorRef(std::shared_ptr<detail::CellBase> cell) : cell_(std::move(cell)) {}
    std::shared_ptr<detail::CellBase> cell_;
};

template <class Msg>
struct Envelope {
    Msg message;
    ActorRef sender;  // empty when sent from outside any actor
};

template <class Msg>
class ActorSystem;

template <class Msg>
class Context;

template <class Msg>
class Actor {
public:
    virtual ~Actor() = default;
    virtual void receive(Context<Msg>& ctx, Envelope<Msg> envelope) = 0;
};

/// Handed to an actor for the duration of one handler invocation.
template <class Msg>
class Context {
public:
    const ActorRef& self() const noexcept { return self_; }
    const ActorRef& sender() const noexcept { return sender_; }
    ActorSystem<Msg>& system() noexcept { return system_; }

    void send(const ActorRef& target, Msg msg) { system_.send(target, std::move(msg), self_); }

    template <class T, class... Args>
    ActorRef spawn(Args&&... args) {
        return system_.template spawn<T>(std::forward<Args>(args)...);
    }

    /// Terminates this actor once the current handler returns. Queued messages are dropped.
    void quit() noexcept { quit_ = true; }

private:
    friend class ActorSystem<Msg>;
    Context(ActorSystem<Msg>& system, ActorRef self, ActorRef sender)
        : system_(system), self_(std::move(self)), sender_(std::move(sender)) {}

    ActorSystem<Msg>& system_;
    ActorRef self_;
    ActorRef sender_;
    bool quit_ = false;
};

struct RuntimeStats {
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t spawned = 0;
    std::size_t live_actors = 0;
    std::vector<std::uint64_t> sent_by_kind;  // indexed by variant alternative when Msg is a variant
};

template <class Msg>
class ActorSystem {
public:
    explicit ActorSystem(unsigned workers, unsigned throughput = 64) : throughput_(throughput ? throughput : 1) {
        if (workers == 0) throw std::invalid_argument("actor system needs at least one worker");
        if constexpr (kIsVariant) sent_by_kind_ = std::make_unique<std::atomic<std::uint64_t>[]>(kKinds);
        threads_.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) threads_.emplace_back([this] { worker_loop(); });
    }

    ActorSystem(const ActorSystem&) = delete;
    ActorSystem& operator=(const ActorSystem&) = delete;

    ~ActorSystem() { shutdown(); }

    template <class T, class... Args>
    ActorRef spawn(Args&&... args) {
        auto cell = std::make_shared<Cell>(next_id_.fetch_add(1, std::memory_order_relaxed));
        cell->behavior = std::make_unique<T>(std::forward<Args>(args)...);
        {
            std::lock_guard lock(registry_mutex_);
            registry_.emplace(cell->id, cell);
        }
        spawned_.fetch_add(1, std::memory_order_relaxed);
        return ActorRef(std::move(cell));
    }

    /// Fire-and-forget. `sender` is what the receiver observes as Context::sender().
    void send(const ActorRef& target, Msg msg, ActorRef sender = {}) {
        if (!target) throw std::invalid_argument("send to empty ActorRef");
        if constexpr (kIsVariant) sent_by_kind_[msg.index()].fetch_add(1, std::memory_order_relaxed);
        auto* cell = static_cast<Cell*>(target.cell_.get());
        bool schedule = false;
        {
            std::lock_guard lock(cell->mutex);
            if (cell->terminated) {
                dropped_.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            add_pending(1);
            cell->mailbox.push_back(Envelope<Msg>{std::move(msg), std::move(sender)});
            if (!cell->scheduled) {
                cell->scheduled = true;
                schedule = true;
            }
        }
        if (schedule) enqueue_ready(std::static_pointer_cast<Cell>(target.cell_));
    }

    /// Blocks until no message is queued or being handled, or a handler has failed.
    /// Rethrows the first handler exception, if any.
    void await_quiescent() {
        std::unique_lock lock(pending_mutex_);
        pending_cv_.wait(lock, [this] { return pending_ == 0 || failure_; });
        if (failure_) std::rethrow_exception(failure_);
    }

    bool quiescent() const {
        std::lock_guard lock(pending_mutex_);
        return pending_ == 0;
    }

    RuntimeStats stats() const {
        RuntimeStats s;
        s.delivered = delivered_.load();
        s.dropped = dropped_.load();
        s.spawned = spawned_.load();
        {
            std::lock_guard lock(registry_mutex_);
            s.live_actors = registry_.size();
        }
        if constexpr (kIsVariant) {
            for (std::size_t i = 0; i < kKinds; ++i) s.sent_by_kind.push_back(sent_by_kind_[i].load());
        }
        return s;
    }

    std::size_t live_actors() const {
        std::lock_guard lock(registry_mutex_);
        return registry_.size();
    }

    std::uint64_t dropped() const noexcept { return dropped_.load(); }

    /// Stops the workers and destroys every actor that is still alive. Idempotent.
    void shutdown() {
        {
            std::lock_guard lock(ready_mutex_);
            if (stopping_) return;
            stopping_ = true;
        }
        ready_cv_.notify_all();
        for (auto& t : threads_) t.join();
        std::unordered_map<std::uint64_t, std::shared_ptr<Cell>> remaining;
        {
            std::lock_guard lock(registry_mutex_);
            remaining.swap(registry_);
        }
        for (auto& [id, cell] : remaining) {
            std::unique_ptr<Actor<Msg>> behavior;
            {
                std::lock_guard lock(cell->mutex);
                cell->terminated = true;
                cell->mailbox.clear();
                behavior = std::move(cell->behavior);
            }
        }
    }

private:
    template <class T>
    struct variant_size_or_zero : std::integral_constant<std::size_t, 0> {};
    template <class... Ts>
    struct variant_size_or_zero<std::variant<Ts...>> : std::integral_constant<std::size_t, sizeof...(Ts)> {};
    static constexpr std::size_t kKinds = variant_size_or_zero<Msg>::value;
    static constexpr bool kIsVariant = kKinds > 0;

    struct Cell : detail::CellBase {
        using detail::CellBase::CellBase;
        std::mutex mutex;
        std::deque<Envelope<Msg>> mailbox;
        bool scheduled = false;
        bool terminated = false;
        std::unique_ptr<Actor<Msg>> behavior;
    };

    void add_pending(std::int64_t n) {
        std::lock_guard lock(pending_mutex_);
        pending_ += n;
    }

    void sub_pending(std::int64_t n) {
        bool notify = false;
        {
            std::lock_guard lock(pending_mutex_);
            pending_ -= n;
            notify = pending_ == 0;
        }
        if (notify) pending_cv_.notify_all();
    }

    void fail(std::exception_ptr error) {
        {
            std::lock_guard lock(pending_mutex_);
            if (!failure_) failure_ = error;
        }
        pending_cv_.notify_all();
    }

    void enqueue_ready(std::shared_ptr<Cell> cell) {
        {
            std::lock_guard lock(ready_mutex_);
            ready_.push_back(std::move(cell));
        }
        ready_cv_.notify_one();
    }

    void worker_loop() {
        for (;;) {
            std::shared_ptr<Cell> cell;
            {
                std::unique_lock lock(ready_mutex_);
                ready_cv_.wait(lock, [this] { return stopping_ || !ready_.empty(); });
                if (stopping_) return;
                cell = std::move(ready_.front());
                ready_.pop_front();
            }
            run_batch(cell);
        }
    }

    void run_batch(const std::shared_ptr<Cell>& cell) {
        for (unsigned handled = 0; handled < throughput_; ++handled) {
            Envelope<Msg> envelope;
            {
                std::lock_guard lock(cell->mutex);
                if (cell->terminated || cell->mailbox.empty()) {
                    cell->scheduled = false;
                    return;
                }
                envelope = std::move(cell->mailbox.front());
                cell->mailbox.pop_front();
            }
            Context<Msg> ctx(*this, ActorRef(cell), envelope.sender);
            bool failed = false;
            try {
                cell->behavior->receive(ctx, std::move(envelope));
            } catch (...) {
                failed = true;
                fail(std::current_exception());
            }
            delivered_.fetch_add(1, std::memory_order_relaxed);
            if (ctx.quit_ || failed) {
                terminate(cell);
                sub_pending(1);
                return;
            }
            sub_pending(1);
        }
        // Batch exhausted; give other actors a turn. `scheduled` stays set.
        bool more = false;
        {
            std::lock_guard lock(cell->mutex);
            more = !cell->mailbox.empty();
            if (!more) cell->scheduled = false;
        }
        if (more) enqueue_ready(cell);
    }

    void terminate(const std::shared_ptr<Cell>& cell) {
        std::unique_ptr<Actor<Msg>> behavior;
        std::size_t leftover = 0;
        {
            std::lock_guard lock(cell->mutex);
            cell->terminated = true;
            cell->scheduled = false;
            leftover = cell->mailbox.size();
            cell->mailbox.clear();
            behavior = std::move(cell->behavior);
        }
        behavior.reset();
        if (leftover) {
            dropped_.fetch_add(leftover, std::memory_order_relaxed);
            sub_pending(static_cast<std::int64_t>(leftover));
        }
        std::lock_guard lock(registry_mutex_);
        registry_.erase(cell->id);
    }

    const unsigned throughput_;
    std::vector<std::thread> threads_;

    std::mutex ready_mutex_;
    std::condition_variable ready_cv_;
    std::deque<std::shared_ptr<Cell>> ready_;
    bool stopping_ = false;

    mutable std::mutex pending_mutex_;
    std::condition_variable pending_cv_;
    std::int64_t pending_ = 0;
    std::exception_ptr failure_;

    mutable std::mutex registry_mutex_;
    std::unordered_map<std::uint64_t, std::shared_ptr<Cell>> registry_;

    std::atomic<std::uint64_t> next_id_{1};
    std::atomic<std::uint64_t> delivered_{0};
    std::atomic<std::uint64_t> dropped_{0};
    std::atomic<std::uint64_t> spawned_{0};
    std::unique_ptr<std::atomic<std::uint64_t>[]> sent_by_kind_;
};

}  // namespace atlasforge::actor
