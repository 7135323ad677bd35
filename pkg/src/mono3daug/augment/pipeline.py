"""Batch augmentation over a split.

Each schedule entry materializes one augmented copy of every split sample
into its own KITTI-layout subtree ``<out_root>/<NN>_<op>/``; an empty
schedule copies the split byte-for-byte into ``<out_root>/00_copy/``.

Determinism: sample ordinal i under entry e draws from the stream derived
as (seed, [e, i]) - partners first, then op-internal draws - so outputs are
a pure function of (dataset bytes, config, seed) for any worker count.
"""

from __future__ import annotations

import logging
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from mono3daug.augment import ops
from mono3daug.augment.config import (
    OP_CUTOUT,
    OP_CUTPASTE,
    OP_MIXUP,
    OP_MOSAIC,
    OP_PHOTOMETRIC,
    PARTNER_COUNT,
    AugmentConfig,
    op_config,
)
from mono3daug.core.rng import derive_stream
from mono3daug.errors import UnknownOp
from mono3daug.kitti_io.dataset import DatasetIndex, load_sample, write_sample

log = logging.getLogger(__name__)

COPY_OP = "copy"


@dataclass(frozen=True)
class ScheduleEntry:
    op: str
    overrides: dict = field(default_factory=dict)


@dataclass
class EntrySummary:
    index: int
    op: str
    out_dir: str
    samples_written: int = 0
    counters: dict = field(default_factory=dict)

    def add(self, counters: dict) -> None:
        self.samples_written += 1
        for key, value in counters.items():
            self.counters[key] = self.counters.get(key, 0) + value


@dataclass
class PipelineSummary:
    entries: list[EntrySummary] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "index": e.index,
                    "op": e.op,
                    "out_dir": e.out_dir,
                    "samples_written": e.samples_written,
                    "counters": dict(sorted(e.counters.items())),
                }
                for e in self.entries
            ],
            "failures": [{"id": i, "error": msg} for i, msg in self.failures],
        }

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            counters = " ".join(f"{k}={v}" for k, v in sorted(e.counters.items()))
            lines.append(
                f"[{e.index:02d}] {e.op}: {e.samples_written} sample(s) -> {e.out_dir}"
                + (f" ({counters})" if counters else "")
            )
        for sample_id, msg in self.failures:
            lines.append(f"FAILED {sample_id}: {msg}")
        return "\n".join(lines)


def _draw_partners(rng, ordinal: int, split_ids: Sequence[str], count: int) -> list[str]:
    pool = len(split_ids) - 1
    if count > 0 and pool < 1:
        raise ValueError("split has no partner samples to draw from")
    partners = []
    for _ in range(count):
        j = rng.randint(pool)
        if j >= ordinal:
            j += 1
        partners.append(split_ids[j])
    return partners


def _apply_entry_op(op, cfg, index, split_ids, ordinal, rng):
    sample = load_sample(index, split_ids[ordinal])
    partner_ids = _draw_partners(rng, ordinal, split_ids, PARTNER_COUNT[op])
    partners = [load_sample(index, pid) for pid in partner_ids]
    if op == OP_CUTOUT:
        return ops.cutout(sample, cfg, rng)
    if op == OP_PHOTOMETRIC:
        return ops.photometric(sample, cfg, rng)
    if op == OP_MIXUP:
        return ops.box_mixup(sample, partners[0], cfg, rng)
    if op == OP_CUTPASTE:
        return ops.box_cut_paste(sample, partners[0], cfg, rng)
    if op == OP_MOSAIC:
        return ops.mosaic_tile([sample, *partners], cfg, rng)
    raise UnknownOp(f"unknown op {op!r}")


def _copy_sample(index: DatasetIndex, sample_id: str, out_dir: Path) -> None:
    image_src = index.image_path(sample_id)
    shutil.copyfile(image_src, out_dir / "image_2" / image_src.name)
    label_src = index.label_path(sample_id)
    if label_src.is_file():
        shutil.copyfile(label_src, out_dir / "label_2" / label_src.name)


def run_pipeline(
    index: DatasetIndex,
    split_ids: Sequence[str],
    schedule: Sequence[ScheduleEntry],
    seed: int,
    out_root,
    workers: int = 1,
    base_config: AugmentConfig | None = None,
) -> PipelineSummary:
    """Process every split sample independently through each schedule entry.

    Per-sample failures are recorded and do not abort the batch.
    """
    out_root = Path(out_root)
    base_config = base_config or AugmentConfig()
    split_ids = list(split_ids)
    summary = PipelineSummary()

    if not schedule:
        resolved = [(0, COPY_OP, None, out_root / "00_copy")]
    else:
        resolved = [
            (e_idx, entry.op, op_config(base_config, entry.op, entry.overrides),
             out_root / f"{e_idx:02d}_{entry.op}")
            for e_idx, entry in enumerate(schedule)
        ]

    for e_idx, op, cfg, out_dir in resolved:
        (out_dir / "image_2").mkdir(parents=True, exist_ok=True)
        (out_dir / "label_2").mkdir(parents=True, exist_ok=True)
        entry_summary = EntrySummary(index=e_idx, op=op, out_dir=str(out_dir))

        def work(ordinal: int):
            sample_id = split_ids[ordinal]
            try:
                if op == COPY_OP:
                    _copy_sample(index, sample_id, out_dir)
                    return ordinal, {}, None
                rng = derive_stream(seed, [e_idx, ordinal])
                augmented = _apply_entry_op(op, cfg, index, split_ids, ordinal, rng)
                write_sample(augmented, out_dir)
                return ordinal, augmented.counters, None
            except Exception as exc:  # noqa: BLE001 - reported per sample
                log.warning("entry %02d %s: sample %s failed: %s", e_idx, op, sample_id, exc)
                return ordinal, None, f"{type(exc).__name__}: {exc}"

        if workers > 1 and len(split_ids) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(work, range(len(split_ids))))
        else:
            results = [work(i) for i in range(len(split_ids))]

        for ordinal, counters, error in sorted(results, key=lambda r: r[0]):
            if error is not None:
                summary.failures.append((split_ids[ordinal], error))
            else:
                entry_summary.add(counters)
        summary.entries.append(entry_summary)
    return summary
