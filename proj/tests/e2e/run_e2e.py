#!/usr/bin/env python3
"""serve -> simulate-sensors -> chat against a real process, compared with a golden transcript.

Usage: run_e2e.py --ami PATH --source-dir DIR [--write-golden]
"""
import argparse
import os
import re
import signal
import subprocess
import sys
import tempfile
from pathlib import Path

CHAT_INPUT = """How's the weather this hour?
What is the average fine dust level?
The sensor in the kitchen is stuck
tell me a joke
"""


def fail(msg):
    print(f"FAIL: {msg}")
    sys.exit(1)


def write_config(source_dir: Path, tmp: Path) -> Path:
    example = (source_dir / "config" / "ami.example.toml").read_text()
    example = example.replace('bind_address = "127.0.0.1:8080"', 'bind_address = "127.0.0.1:0"')
    example = example.replace('scripted_rules_path = "rules.txt"',
                              f'scripted_rules_path = "{source_dir / "config" / "rules.txt"}"')
    example = example.replace('# data_dir = "../var"', f'data_dir = "{tmp / "var"}"')
    cfg = tmp / "ami.toml"
    cfg.write_text(example)
    return cfg


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ami", required=True)
    ap.add_argument("--source-dir", required=True, type=Path)
    ap.add_argument("--write-golden", action="store_true")
    args = ap.parse_args()
    args.source_dir = args.source_dir.resolve()
    golden = args.source_dir / "tests" / "golden" / "e2e_chat.txt"

    with tempfile.TemporaryDirectory() as tmp_name:
        tmp = Path(tmp_name)
        cfg = write_config(args.source_dir, tmp)
        server = subprocess.Popen([args.ami, "serve", "--config", str(cfg)],
                                  stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        try:
            line = server.stdout.readline()
            m = re.match(r"listening on ([\d.]+):(\d+)", line)
            if not m:
                fail(f"unexpected serve output {line!r}; stderr: {server.stderr.read()}")
            url = f"http://{m.group(1)}:{m.group(2)}"

            sim = subprocess.run([args.ami, "simulate-sensors", "--url", url, "--devices", "2",
                                  "--interval", "60", "--duration", "180", "--seed", "42",
                                  "--start", "2025-01-01T10:00:00Z", "--fast"],
                                 capture_output=True, text=True, timeout=60)
            if sim.returncode != 0 or "posted 6/6 readings" not in sim.stdout:
                fail(f"simulate-sensors: rc={sim.returncode} out={sim.stdout!r} err={sim.stderr!r}")

            env = dict(os.environ, AMI_PASSWORD="alice-pass")
            chat = subprocess.run([args.ami, "chat", "--url", url, "--user", "alice"],
                                  input=CHAT_INPUT, capture_output=True, text=True, timeout=60, env=env)
            if chat.returncode != 0:
                fail(f"chat: rc={chat.returncode} err={chat.stderr!r}")

            bad = subprocess.run([args.ami, "chat", "--url", url, "--user", "alice", "--password", "wrong"],
                                 input="hi\n", capture_output=True, text=True, timeout=60)
            if bad.returncode == 0 or "401" not in bad.stderr:
                fail(f"wrong password should fail with 401: rc={bad.returncode} err={bad.stderr!r}")
        finally:
            server.send_signal(signal.SIGTERM)
            try:
                rest, _ = server.communicate(timeout=20)
            except subprocess.TimeoutExpired:
                server.kill()
                fail("server did not stop on SIGTERM")
        if server.returncode != 0 or "shutting down" not in rest:
            fail(f"server exit {server.returncode}, output {rest!r}")

        # Data written under data_dir survives the restart.
        readings = (tmp / "var" / "readings.jsonl").read_text().splitlines()
        if len(readings) != 6:
            fail(f"expected 6 persisted readings, found {len(readings)}")
        issues = (tmp / "var" / "issues.jsonl").read_text().splitlines()
        if len(issues) != 1:
            fail(f"expected 1 persisted issue, found {len(issues)}")

    if args.write_golden:
        golden.write_text(chat.stdout)
    expected = golden.read_text()
    if chat.stdout != expected:
        print("--- expected\n" + expected + "--- got\n" + chat.stdout)
        fail("chat transcript differs from golden")
    print("PASS e2e serve/simulate/chat")


if __name__ == "__main__":
    main()
