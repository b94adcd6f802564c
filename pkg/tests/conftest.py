import os

os.environ.setdefault("WEYLSCOPE_THREADS", "1")
