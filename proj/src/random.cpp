#include "stochmatch/random.hpp"

namespace stochmatch {

namespace {
thread_local StreamAudit* active_audit = nullptr;
}

StreamAudit::StreamAudit() : previous_(active_audit) { active_audit = this; }

StreamAudit::~StreamAudit() { active_audit = previous_; }

void StreamAudit::record(const StreamKey& key) {
  if (active_audit != nullptr) active_audit->keys_.push_back(key);
}

}  // namespace stochmatch
