"""Periodic-delayed communication over a single-receiver queue.

Each sender job emits exactly one message; the message becomes visible to the
receiver at the first receiver release at or after the sender job's deadline,
and all messages visible at a release are consumed by that receiver job and
discarded when it ends. Because delivery instants and queue positions depend
only on static task parameters, every index below is a closed-form function
of (task, job) with no shared mutable state: a sender can compute its slot
and the receiver its read range without locks.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import dataclass
from typing import Optional

from .model import PeriodicTask


class QueueCollisionError(Exception):
    """Two live messages mapped to the same queue slot."""


@dataclass(frozen=True)
class PeriodicQueue:
    senders: tuple[PeriodicTask, ...]
    receiver: PeriodicTask
    capacity: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "senders", tuple(self.senders))
        ids = [t.id for t in self.senders]
        if len(set(ids)) != len(ids):
            raise ValueError("sender ids must be distinct")
        if self.capacity is None and self.senders:
            object.__setattr__(self, "capacity", queue_bound(self))

    def hyperperiod(self) -> int:
        h = self.receiver.period
        for t in self.senders:
            h = math.lcm(h, t.period)
        return h


@dataclass(frozen=True)
class MessageRef:
    sender: int
    job: int              # 0-based job index of the sender
    send_deadline: int
    delivery_time: int
    seq: int              # 1-based global sequence number
    slot: int             # seq mod capacity


def received_count(q: PeriodicQueue, t: int) -> int:
    """Number of sender jobs whose deadline has passed by time t
    (sum of floor((t - D_j) / T_j) + 1 over senders, each term at least 0)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    total = 0
    for snd in q.senders:
        total += max(0, (t - snd.deadline) // snd.period + 1)
    return total


def collide(s: PeriodicTask, t: int) -> int:
    """1 iff t is one of the task's job deadlines."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return 1 if t >= s.deadline and (t - s.deadline) % s.period == 0 else 0


def followers(q: PeriodicQueue, sender_id: int, k: int) -> int:
    """Senders after this one in the queue order whose deadline coincides
    with this job's deadline."""
    pos = _sender_pos(q, sender_id)
    snd = q.senders[pos]
    t = k * snd.period + snd.deadline
    return sum(collide(other, t) for other in q.senders[pos + 1:])


def send_index(q: PeriodicQueue, sender_id: int, k: int) -> int:
    """1-based global sequence number of the message sent by job k."""
    pos = _sender_pos(q, sender_id)
    snd = q.senders[pos]
    t = k * snd.period + snd.deadline
    return received_count(q, t) - followers(q, sender_id, k)


def read_index(q: PeriodicQueue, k: int) -> int:
    """Highest sequence number visible to receiver job k; the job consumes
    sequence numbers read_index(k-1)+1 .. read_index(k)."""
    if k < 0:
        return 0
    return received_count(q, k * q.receiver.period)


def delivery_time(q: PeriodicQueue, sender_id: int, k: int) -> int:
    """First receiver release at or after the sender job's deadline."""
    snd = q.senders[_sender_pos(q, sender_id)]
    dl = k * snd.period + snd.deadline
    ti = q.receiver.period
    return -(-dl // ti) * ti


def queue_bound(q: PeriodicQueue) -> int:
    """Sufficient queue size: sum of floor((2*T_recv + D_max)/T_j) + 1."""
    if not q.senders:
        raise ValueError("queue bound needs at least one sender")
    d_max = max(t.deadline for t in q.senders)
    span = 2 * q.receiver.period + d_max
    return sum(span // t.period + 1 for t in q.senders)


def _sender_pos(q: PeriodicQueue, sender_id: int) -> int:
    for i, t in enumerate(q.senders):
        if t.id == sender_id:
            return i
    raise KeyError(f"no sender {sender_id} in queue")


def message(q: PeriodicQueue, sender_id: int, k: int) -> MessageRef:
    snd = q.senders[_sender_pos(q, sender_id)]
    seq = send_index(q, sender_id, k)
    return MessageRef(
        sender=sender_id,
        job=k,
        send_deadline=k * snd.period + snd.deadline,
        delivery_time=delivery_time(q, sender_id, k),
        seq=seq,
        slot=seq % q.capacity,
    )


# -- simulation ----------------------------------------------------------------

@dataclass(frozen=True)
class ReceiverJobTrace:
    job: int
    release: int
    discard_time: int     # end of the receiver job's window
    messages: tuple[MessageRef, ...]


def simulate(q: PeriodicQueue, horizon: int,
             jitter_rng: Optional[random.Random] = None
             ) -> list[ReceiverJobTrace]:
    """Run the delivery model over [0, horizon].

    Sender jobs complete at a random instant inside their window (at release
    when jitter_rng is None), yet message timestamps, ordering, and slots come
    from the closed-form indexes only, so the returned trace is independent
    of the jitter. Raises QueueCollisionError if two messages that can be
    simultaneously live share a slot.
    """
    if q.senders and horizon < q.hyperperiod():
        raise ValueError(
            f"horizon {horizon} shorter than one hyperperiod {q.hyperperiod()}"
        )
    msgs: list[tuple[MessageRef, int]] = []   # (message, write instant)
    for snd in q.senders:
        k = 0
        while k * snd.period + snd.deadline <= horizon:
            release = k * snd.period
            write = release if jitter_rng is None else \
                jitter_rng.randint(release, release + snd.deadline)
            msgs.append((message(q, snd.id, k), write))
            k += 1

    by_seq = {m.seq: m for m, _ in msgs}
    if len(by_seq) != len(msgs):
        raise RuntimeError("duplicate sequence numbers in the message set")

    trace: list[ReceiverJobTrace] = []
    ti, di = q.receiver.period, q.receiver.deadline
    for k in range(horizon // ti + 1):
        lo = read_index(q, k - 1) + 1
        hi = read_index(q, k)
        consumed = tuple(by_seq[seq] for seq in range(lo, hi + 1)
                         if seq in by_seq)
        trace.append(ReceiverJobTrace(
            job=k, release=k * ti, discard_time=k * ti + di,
            messages=consumed,
        ))

    _check_collisions(q, msgs)
    return trace


def _check_collisions(q: PeriodicQueue,
                      msgs: list[tuple[MessageRef, int]]) -> None:
    # A message is live from its write instant until its consumer's window
    # ends (worst case); two live intervals on one slot must not overlap.
    by_slot: dict[int, list[tuple[int, int, MessageRef]]] = {}
    di = q.receiver.deadline
    for m, write in msgs:
        discard = m.delivery_time + di
        by_slot.setdefault(m.slot, []).append((write, discard, m))
    for slot, intervals in by_slot.items():
        intervals.sort(key=lambda iv: (iv[0], iv[1], iv[2].seq))
        for (w1, d1, m1), (w2, d2, m2) in zip(intervals, intervals[1:]):
            if w2 < d1:
                raise QueueCollisionError(
                    f"slot {slot}: message (sender {m1.sender}, job {m1.job}) "
                    f"live until {d1} overlaps (sender {m2.sender}, job "
                    f"{m2.job}) written at {w2}"
                )


def live_count(q: PeriodicQueue, msgs_horizon: int, t: int) -> int:
    """Messages in flight at time t (undelivered or delivered-but-unconsumed),
    counting each message from its earliest possible write instant (the
    sender job's release) until the end of its consumer's window."""
    n = 0
    for snd in q.senders:
        k = 0
        while k * snd.period + snd.deadline <= msgs_horizon:
            release = k * snd.period
            discard = delivery_time(q, snd.id, k) + q.receiver.deadline
            if release <= t < discard:
                n += 1
            k += 1
    return n


# -- serialization ---------------------------------------------------------------

def _task_from_doc(doc: dict) -> PeriodicTask:
    return PeriodicTask(id=int(doc["id"]), period=int(doc["T"]),
                        capacity=int(doc["C"]), deadline=int(doc["D"]))


def queue_from_doc(doc: dict) -> PeriodicQueue:
    try:
        senders = tuple(_task_from_doc(d) for d in doc["senders"])
        receiver = _task_from_doc(doc["receiver"])
        cap = doc.get("Q")
        return PeriodicQueue(senders=senders, receiver=receiver,
                             capacity=None if cap is None else int(cap))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed queue document: {exc}") from exc


def queue_to_doc(q: PeriodicQueue) -> dict:
    def task_doc(t: PeriodicTask) -> dict:
        return {"id": t.id, "T": t.period, "C": t.capacity, "D": t.deadline}

    return {"senders": [task_doc(t) for t in q.senders],
            "receiver": task_doc(q.receiver), "Q": q.capacity}


def loads_queue(text: str) -> PeriodicQueue:
    return queue_from_doc(json.loads(text))


TRACE_COLUMNS = ("receiver_job", "seq", "sender", "sender_job",
                 "send_deadline", "delivery_time", "slot")


def trace_to_csv(trace: list[ReceiverJobTrace]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for rj in trace:
        for m in rj.messages:
            w.writerow([rj.job, m.seq, m.sender, m.job, m.send_deadline,
                        m.delivery_time, m.slot])
    return out.getvalue()
