# src/nbg_toolkit/utils/__init__.py
