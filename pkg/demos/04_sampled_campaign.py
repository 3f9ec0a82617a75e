"""A small resumable campaign: interrupt it, resume it, and compare reports.

Run: python3 demos/04_sampled_campaign.py
"""

import tempfile
from pathlib import Path

from d4pairs.campaign import CampaignConfig, emit_report, run_campaign


def main():
    with tempfile.TemporaryDirectory() as tmp:
        ckpt = Path(tmp) / "run.jsonl"
        cfg = {"family_filter": ["1:0", "812:404"], "k_sample": "random:2:7", "record_timing": False,
               "checkpoint_path": str(ckpt)}
        first = run_campaign(CampaignConfig.from_mapping(cfg))
        print("first run:", {k: v for k, v in first.summary.items() if k != "wall_time_s"})

        # simulate a crash after a third of the records, mid-write
        lines = ckpt.read_text().splitlines(keepends=True)
        cut = len(lines) // 3
        ckpt.write_text("".join(lines[:cut]) + lines[cut][:40])
        resumed = run_campaign(CampaignConfig.from_mapping(cfg))
        same = emit_report(resumed.records, "json", resumed.config_echo) == \
            emit_report(first.records, "json", first.config_echo)
        print(f"resumed from {cut} checkpointed records; identical report: {same}")
        print(emit_report(resumed.records[:3], "csv").decode())


if __name__ == "__main__":
    main()
