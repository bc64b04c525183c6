"""Allow `python -m dif` as an alternative to the `dif` console script."""

from dif.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
