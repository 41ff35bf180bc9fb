#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import seaborn as sns


MM_PER_INCH = 25.4

plot_type = {
    'plot',
    'semilogy',
    'heatmap',
    None
}

class Figdata:
    """
    data : y values (plot, semilogy) or a 2-D array (heatmap)
    x : abscissa shared by data and data2
    data2 : extra curves drawn on the same axes
    """
    def __init__(self, data, x=None, data2=[], type=None, labels=None, title=None, xlabel=None, ylabel=None,
                 xlim=None, ylim=None):
        if type not in plot_type:
            raise ValueError(f"unknown plot type: {type}")
        self.data = data
        self.x = x
        self.data2 = data2
        self.type = type
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.xlim = xlim
        self.ylim = ylim
        self.labels = labels


def _curve(ax, fig, y, log=False):
    draw = ax.semilogy if log else ax.plot
    return draw(y) if fig.x is None else draw(fig.x, y)


def _draw(ax, fig):
    if fig.type in (None, 'plot', 'semilogy'):
        log = fig.type == 'semilogy'
        _curve(ax, fig, fig.data, log)
        for d in fig.data2:
            _curve(ax, fig, d, log)
        if fig.labels:
            ax.legend(fig.labels)
    elif fig.type == 'heatmap':
        sns.heatmap(fig.data, ax=ax, cbar=True, xticklabels=False, yticklabels=False)
    if fig.xlabel:
        ax.set_xlabel(fig.xlabel)
    if fig.ylabel:
        ax.set_ylabel(fig.ylabel)
    if fig.title:
        ax.set_title(fig.title, loc='left')
    if fig.xlim:
        ax.set_xlim(fig.xlim)
    if fig.ylim:
        ax.set_ylim(fig.ylim)


def show_figs(*args, dpi=100, width_mm=120, height_mm=80, margin_mm=(15, 15, 25, 15), gap_mm=15,
              fold_interval=1, export_path="fig.png"):
    """
    lay the panels out column by column, fold_interval panels per column.
    margin_mm : (top, bottom, left, right)
    """
    cols = math.ceil(len(args) / fold_interval)
    rows = fold_interval
    top, bottom, left, right = margin_mm
    total_w = left + right + cols * width_mm + (cols - 1) * gap_mm
    total_h = top + bottom + rows * height_mm + (rows - 1) * gap_mm

    with plt.style.context('default'):
        fig = plt.figure(figsize=(total_w / MM_PER_INCH, total_h / MM_PER_INCH), dpi=dpi)
        for idx, panel in enumerate(args):
            col, row = divmod(idx, fold_interval)
            x0 = (left + (width_mm + gap_mm) * col) / total_w
            y0 = (bottom + (height_mm + gap_mm) * (rows - 1 - row)) / total_h
            ax = fig.add_axes((x0, y0, width_mm / total_w, height_mm / total_h))
            if isinstance(panel, Figdata):
                _draw(ax, panel)
            else:
                ax.plot(panel)
        fig.savefig(export_path)
        plt.close(fig)
    print(f"export fig -> {export_path}")
    return export_path
