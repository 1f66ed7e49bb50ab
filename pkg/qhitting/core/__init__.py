"""Spec files and reports for the command line front end"""
from .spec_file import ChannelSpec, load_channel_spec
from . import report
