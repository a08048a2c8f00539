# package init
