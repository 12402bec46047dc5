import argparse
import csv
import json
import logging
import os
import sys
import time

import yaml

logger = logging.getLogger(__name__)


class LogWriter(object):
    # kind of inspired form openai.baselines.bench.monitor
    def __init__(self, path, keys, header="", name="monitor.csv", timed=True):
        self.keys = tuple(keys) + (("t",) if timed else ())
        self.timed = timed
        assert path is not None

        if path == "-":
            self.f = sys.stdout
            self.owned = False
        else:
            if os.path.isdir(path) or not os.path.splitext(path)[1]:
                os.makedirs(path, exist_ok=True)
                filename = os.path.join(path, name)
            else:
                filename = path
            if os.path.exists(filename):
                os.remove(filename)
            logger.info("Writing logs to %s", filename)
            self.f = open(filename, "wt", newline="")
            self.owned = True

        if isinstance(header, dict):
            header = "# {} \n".format(json.dumps(header))
        self.f.write(header)
        self.logger = csv.DictWriter(self.f, fieldnames=self.keys, lineterminator="\n")
        self.logger.writeheader()
        self.f.flush()
        self.tstart = time.time()

    def write_row(self, row):
        if self.logger:
            if self.timed:
                row["t"] = time.time() - self.tstart
            self.logger.writerow(row)
            self.f.flush()

    def close(self):
        if self.owned:
            self.f.close()
        self.logger = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def load_config(filename):
    """Read a YAML mapping, or `key=value` lines whose values are YAML scalars."""
    with open(filename) as f:
        if filename.endswith("yaml") or filename.endswith("yml"):
            conf = yaml.safe_load(f) or {}
            if not isinstance(conf, dict):
                raise ValueError(f"{filename}: configuration must be a mapping")
            return {k.replace("-", "_"): v for k, v in conf.items()}

        conf = {}
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{filename}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            conf[k.strip().replace("-", "_")] = yaml.safe_load(v.strip())
        return conf


class LoadFromFile(argparse.Action):
    # parser.add_argument('--conf', action=LoadFromFile)
    def __call__(self, parser, namespace, values, option_string=None):
        try:
            conf = load_config(values)
        except (OSError, ValueError, yaml.YAMLError) as e:
            parser.error(f"cannot load configuration: {e}")
        setattr(namespace, self.dest, conf)


def save_argparse(args, filename, exclude=None):
    if isinstance(exclude, str):
        exclude = [
            exclude,
        ]
    exclude = set(exclude or ())
    args = {
        k: v if isinstance(v, (bool, int, float, str, type(None))) else str(v)
        for k, v in args.__dict__.items()
        if k not in exclude and not callable(v)
    }
    if filename.endswith("yaml") or filename.endswith("yml"):
        with open(filename, "w") as fout:
            yaml.safe_dump(args, fout)
    else:
        with open(filename, "w") as f:
            for k, v in args.items():
                f.write(f"{k}={v}\n")
