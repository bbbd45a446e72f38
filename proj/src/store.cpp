#include "mrdt/store.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace mrdt {

Store Store::initialize(MrdtPtr type) {
  Store store;
  store.type_ = std::move(type);
  VersionNode root;
  root.state = store.type_->initial_state();
  root.history = std::make_shared<const AbstractExec>();
  std::uint64_t id = store.push_node(std::move(root));
  store.heads_.emplace("b0", id);
  return store;
}

std::vector<std::string> Store::branches() const {
  std::vector<std::string> out;
  out.reserve(heads_.size());
  for (const auto& [name, id] : heads_) out.push_back(name);
  return out;
}

const VersionNode& Store::head(const std::string& branch) const {
  auto it = heads_.find(branch);
  if (it == heads_.end()) raise(ErrorCode::UnknownBranch, "unknown branch " + branch);
  return node(it->second);
}

const AbstractExec& Store::history(const std::string& branch) const {
  return *head(branch).history;
}

StatePtr Store::state(const std::string& branch) const { return head(branch).state; }

std::uint64_t Store::push_node(VersionNode n) {
  n.id = dag_.size();
  dag_.push_back(std::make_shared<const VersionNode>(std::move(n)));
  return dag_.back()->id;
}

void Store::create_branch(const std::string& src, const std::string& dst) {
  auto it = heads_.find(src);
  if (it == heads_.end()) raise(ErrorCode::UnknownBranch, "unknown branch " + src);
  if (heads_.count(dst)) raise(ErrorCode::DuplicateBranch, "branch " + dst + " already exists");
  heads_.emplace(dst, it->second);
}

Value Store::apply_operation(const std::string& branch, const Op& op) {
  const VersionNode& current = head(branch);

  // Issue the next tick so timestamps are strictly positive and unique.
  Timestamp stamp = clock_ + 1;
  DoResult result = type_->apply(op, current.state, stamp);
  Event event{stamp, op, result.second, stamp};

  VersionNode next;
  next.parents = {current.id};
  next.state = result.first;
  next.history = std::make_shared<const AbstractExec>(abs_do(*current.history, std::move(event)));
  heads_[branch] = push_node(std::move(next));
  clock_ = stamp;
  return result.second;
}

namespace {

std::set<std::uint64_t> ancestors_of(const std::vector<std::shared_ptr<const VersionNode>>& dag,
                                     std::uint64_t start) {
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> work{start};
  while (!work.empty()) {
    std::uint64_t id = work.back();
    work.pop_back();
    if (!seen.insert(id).second) continue;
    for (std::uint64_t parent : dag[id]->parents) work.push_back(parent);
  }
  return seen;
}

} // namespace

const VersionNode& Store::resolve_lca(const std::string& b1, const std::string& b2) const {
  const VersionNode& h1 = head(b1);
  const VersionNode& h2 = head(b2);

  std::vector<EventId> expected;
  {
    std::vector<EventId> ids1 = h1.history->ids();
    std::vector<EventId> ids2 = h2.history->ids();
    std::set_intersection(ids1.begin(), ids1.end(), ids2.begin(), ids2.end(),
                          std::back_inserter(expected));
  }

  std::set<std::uint64_t> common = ancestors_of(dag_, h1.id);
  std::set<std::uint64_t> other = ancestors_of(dag_, h2.id);

  // Prefer the most recent matching common ancestor.
  for (auto it = common.rbegin(); it != common.rend(); ++it) {
    if (!other.count(*it)) continue;
    if (dag_[*it]->history->ids() == expected) return *dag_[*it];
  }
  raise(ErrorCode::NoUniqueLca,
        "no stored version holds the common history of " + b1 + " and " + b2);
}

void Store::merge_branches(const std::string& into, const std::string& from) {
  const VersionNode& dst = head(into);
  const VersionNode& src = head(from);

  // Ancestor-related heads never run the three-way merge: the merge is a
  // no-op when `from` brings nothing new, and a fast-forward when `into` has
  // nothing of its own. Either way the result matches merging abstractly.
  if (events_subset(*src.history, *dst.history)) return;
  if (events_subset(*dst.history, *src.history)) {
    heads_[into] = src.id;
    return;
  }

  const VersionNode& lca = resolve_lca(into, from);
  VersionNode merged;
  merged.parents = {dst.id, src.id};
  merged.state = type_->merge(lca.state, dst.state, src.state);
  merged.history =
      std::make_shared<const AbstractExec>(abs_merge(*dst.history, *src.history));
  heads_[into] = push_node(std::move(merged));
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

bool operator==(const TraceAction& a, const TraceAction& b) {
  return a.kind == b.kind && a.source == b.source && a.target == b.target && a.op == b.op;
}

Store replay(const Trace& trace, MrdtPtr type) {
  Store store = Store::initialize(std::move(type));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceAction& action = trace[i];
    try {
      switch (action.kind) {
        case TraceAction::Kind::Create:
          store.create_branch(action.source, action.target);
          break;
        case TraceAction::Kind::Do:
          store.apply_operation(action.source, action.op);
          break;
        case TraceAction::Kind::Merge:
          store.merge_branches(action.source, action.target);
          break;
      }
    } catch (const Error& e) {
      raise(ErrorCode::ReplayError,
            "action " + std::to_string(i) + ": " + e.what());
    }
  }
  return store;
}

namespace {

std::string op_to_fields(const Op& op) {
  std::ostringstream out;
  switch (op.kind) {
    case OpKind::Inc:
    case OpKind::Dec:
    case OpKind::Read:
    case OpKind::Enable:
    case OpKind::Disable:
    case OpKind::Dequeue:
      out << "op=" << op_kind_name(op.kind);
      break;
    case OpKind::Write:
    case OpKind::Add:
    case OpKind::Remove:
    case OpKind::Enqueue:
      out << "op=" << op_kind_name(op.kind) << " value=" << op.value;
      break;
    case OpKind::Append:
      out << "op=append msg=" << op.text;
      break;
    case OpKind::MapSet:
    case OpKind::MapGet: {
      const Op& inner = *op.inner;
      out << "op=" << op_kind_name(op.kind) << '.' << op_kind_name(inner.kind)
          << " key=" << op.key;
      switch (inner.kind) {
        case OpKind::Write:
        case OpKind::Add:
        case OpKind::Remove:
        case OpKind::Enqueue:
          out << " value=" << inner.value;
          break;
        case OpKind::Append:
          out << " msg=" << inner.text;
          break;
        default:
          break;
      }
      break;
    }
    case OpKind::Send:
      out << "op=send channel=" << op.key << " msg=" << op.text;
      break;
    case OpKind::ChatRead:
      out << "op=rd channel=" << op.key;
      break;
  }
  return out.str();
}

OpKind kind_from_name(const std::string& name, bool chat_context) {
  if (name == "inc") return OpKind::Inc;
  if (name == "dec") return OpKind::Dec;
  if (name == "rd") return chat_context ? OpKind::ChatRead : OpKind::Read;
  if (name == "wr") return OpKind::Write;
  if (name == "enable") return OpKind::Enable;
  if (name == "disable") return OpKind::Disable;
  if (name == "add") return OpKind::Add;
  if (name == "remove") return OpKind::Remove;
  if (name == "append") return OpKind::Append;
  if (name == "send") return OpKind::Send;
  if (name == "enqueue") return OpKind::Enqueue;
  if (name == "dequeue") return OpKind::Dequeue;
  raise(ErrorCode::ParseError, "unknown op name: " + name);
}

} // namespace

std::string to_line(const TraceAction& action) {
  switch (action.kind) {
    case TraceAction::Kind::Create:
      return "action=create src=" + action.source + " dst=" + action.target;
    case TraceAction::Kind::Do:
      return "action=do branch=" + action.source + " " + op_to_fields(action.op);
    case TraceAction::Kind::Merge:
      return "action=merge into=" + action.source + " from=" + action.target;
  }
  return {};
}

TraceAction parse_line(const std::string& line) {
  // msg= swallows the rest of the line; every other field is one token.
  std::map<std::string, std::string> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    std::size_t eq = line.find('=', pos);
    if (eq == std::string::npos)
      raise(ErrorCode::ParseError, "expected key=value near: " + line.substr(pos));
    std::string key = line.substr(pos, eq - pos);
    if (key == "msg") {
      fields[key] = line.substr(eq + 1);
      break;
    }
    std::size_t end = line.find(' ', eq + 1);
    if (end == std::string::npos) end = line.size();
    fields[key] = line.substr(eq + 1, end - eq - 1);
    pos = end;
  }

  auto need = [&fields, &line](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end())
      raise(ErrorCode::ParseError, "missing field '" + key + "' in: " + line);
    return it->second;
  };
  auto to_int = [](const std::string& text) {
    try {
      return static_cast<std::int64_t>(std::stoll(text));
    } catch (const std::exception&) {
      raise(ErrorCode::ParseError, "bad integer: " + text);
    }
  };

  const std::string& action = need("action");
  if (action == "create") return TraceAction::create(need("src"), need("dst"));
  if (action == "merge") return TraceAction::merge(need("into"), need("from"));
  if (action != "do") raise(ErrorCode::ParseError, "unknown action: " + action);

  const std::string& branch = need("branch");
  std::string op_name = need("op");

  std::string outer = op_name, inner_name;
  if (std::size_t dot = op_name.find('.'); dot != std::string::npos) {
    outer = op_name.substr(0, dot);
    inner_name = op_name.substr(dot + 1);
  }

  Op op;
  if (outer == "set" || outer == "get") {
    if (inner_name.empty())
      raise(ErrorCode::ParseError, "map op needs an inner op, e.g. op=set.add");
    OpKind inner_kind = kind_from_name(inner_name, false);
    Op inner = Op::of(inner_kind);
    switch (inner_kind) {
      case OpKind::Write:
      case OpKind::Add:
      case OpKind::Remove:
      case OpKind::Enqueue:
        inner.value = to_int(need("value"));
        break;
      case OpKind::Append:
        inner.text = need("msg");
        break;
      default:
        break;
    }
    op = outer == "set" ? Op::map_set(need("key"), std::move(inner))
                        : Op::map_get(need("key"), std::move(inner));
  } else {
    bool chat_context = fields.count("channel") > 0;
    op.kind = kind_from_name(outer, chat_context);
    switch (op.kind) {
      case OpKind::Write:
      case OpKind::Add:
      case OpKind::Remove:
      case OpKind::Enqueue:
        op.value = to_int(need("value"));
        break;
      case OpKind::Append:
        op.text = need("msg");
        break;
      case OpKind::Send:
        op.key = need("channel");
        op.text = need("msg");
        break;
      case OpKind::ChatRead:
        op.key = need("channel");
        break;
      default:
        break;
    }
  }
  return TraceAction::perform(branch, std::move(op));
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      trace.push_back(parse_line(line));
    } catch (const Error& e) {
      raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trace;
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const TraceAction& action : trace) out << to_line(action) << '\n';
}

} // namespace mrdt
